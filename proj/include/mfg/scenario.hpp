#pragma once

#include <optional>

#include "mfg/congestion.hpp"
#include "mfg/network.hpp"
#include "mfg/numerics.hpp"

namespace mfg {

struct SolverConfig {
    double tol = 1e-6;
    std::size_t max_iter = 200;
    /// Damping gamma in (0, 1] of the Picard update.
    double damping = 0.5;
    /// Width of the decision-freezing partition; 0 freezes per base cell.
    double epsilon = 0.0;
    double tie_tolerance = 1e-6;
    /// Share of agents assigned to the preferred decision where two decisions tie.
    double split_fraction = 0.5;
};

/// One fully specified problem instance on its shared grid.
struct Scenario {
    Network network;
    TimeGrid grid;
    ThroughputSpec throughput;
    Throughput lambda;
    double beta = 1.0;
    double eta = 1.0;
    double alpha = 1.0;
    CongestionParams congestion;
    double rho_max = 1.0;
    std::optional<PathArray> z0;
    SolverConfig solver;

    /// Slope bound lambda_max + sum_e C_e for admissible masses.
    [[nodiscard]] double mass_lipschitz() const noexcept;
    [[nodiscard]] double max_congestion_cost() const noexcept { return congestion.max_cost(rho_max); }
};

struct ScenarioInputs {
    LinkArray lengths{};
    LinkArray capacities{};
    double horizon = 0.0;
    std::size_t cells = 0;
    ThroughputSpec throughput = ConstantThroughput{};
    double beta = 1.0;
    double eta = 1.0;
    double alpha = 1.0;
    CongestionParams congestion;
    double rho_max = 1.0;
    std::optional<PathArray> z0;
    SolverConfig solver;
};

/// Builds and validates a Scenario. Module errors propagate with their own codes;
/// parameter-range violations raise ValidationError naming the rule.
[[nodiscard]] Scenario make_scenario(const ScenarioInputs& in);

/// Same scenario with different congestion parameters (re-validated).
[[nodiscard]] Scenario with_congestion(const Scenario& base, const CongestionParams& params);

}  // namespace mfg
