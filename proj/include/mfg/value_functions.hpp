#pragma once

#include <array>
#include <vector>

#include "mfg/congestion.hpp"
#include "mfg/scenario.hpp"
#include "mfg/state.hpp"

namespace mfg {

enum class Mode { stay, move };

/// Optimal behaviour of an agent standing at the tail of a link at a given time.
struct LinkDecision {
    Mode mode = Mode::stay;
    double arrival = 0.0;  ///< tau, meaningful only for move
    double control = 0.0;  ///< constant speed length / (tau - t); zero when staying
    double value = 0.0;
    bool tie = false;      ///< stay and move costs are within the tie tolerance
};

[[nodiscard]] LinkDecision stay_decision(double value = 0.0);
[[nodiscard]] LinkDecision move_decision(double entry, double arrival, double length, double value = 0.0);

/// phi_e(rho_e(.)) sampled on the grid with running integrals for every link.
class CongestionIntegrals {
public:
    CongestionIntegrals(const MassTrajectory& rho, const CongestionParams& params);

    [[nodiscard]] double integral(Link e, double a, double b) const noexcept {
        return cumulative_[index(e)].integral(a, b);
    }
    [[nodiscard]] const SampledFunction& cost(Link e) const noexcept { return costs_[index(e)]; }

private:
    std::vector<SampledFunction> costs_;
    std::vector<CumulativeIntegral> cumulative_;
};

/// Constants shared by the per-link cost evaluations.
struct CostContext {
    const Network& network;
    double alpha;
    double horizon;
};

/// Cost of crossing (or failing to leave) link e from entry time t under `decision`.
/// Throws InvalidDecision when a move does not arrive strictly after t.
[[nodiscard]] double link_cost(Link e, double t, const LinkDecision& decision, const CongestionIntegrals& costs,
                               const CostContext& ctx);
[[nodiscard]] double link_cost(Link e, double t, const LinkDecision& decision, const MassTrajectory& rho,
                               const Scenario& scenario);

struct ValueField {
    TimeGrid grid;
    std::array<SampledFunction, kLinkCount> values;
    std::array<std::vector<LinkDecision>, kLinkCount> decisions;
    SampledFunction origin_value;
    std::vector<Link> origin_choice;
    std::vector<bool> origin_tie;

    [[nodiscard]] const SampledFunction& value(Link e) const noexcept { return values[index(e)]; }
    [[nodiscard]] const LinkDecision& decision(Link e, std::size_t k) const { return decisions[index(e)][k]; }
    /// Decision for an agent entering e at an arbitrary time s, built from the neighbouring nodes.
    [[nodiscard]] LinkDecision decision_at(Link e, double s, const Network& network) const;
};

/// Backward computation e4, e5 -> e3 -> e1, e2 -> origin for a frozen mass trajectory.
[[nodiscard]] ValueField value_field(const MassTrajectory& rho, const Scenario& scenario);

/// Expected cost of each path for an agent entering the network at t.
[[nodiscard]] PathArray path_cost_vector(double t, const ValueField& field, const CongestionIntegrals& costs,
                                         const CostContext& ctx);
[[nodiscard]] PathArray path_cost_vector(double t, const ValueField& field, const MassTrajectory& rho,
                                         const Scenario& scenario);

/// Upper bound on the optimal control of link e: 2 (alpha * penalty + T * phi_max) / length.
[[nodiscard]] double control_bound(Link e, const Scenario& scenario);

/// Time-Lipschitz bound on every V^e depending only on (alpha, lengths, phi_max, T).
[[nodiscard]] double value_lipschitz_bound(const Scenario& scenario);

}  // namespace mfg
