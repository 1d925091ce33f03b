#pragma once

#include <vector>

#include "mfg/mass.hpp"
#include "mfg/preferences.hpp"
#include "mfg/scenario.hpp"
#include "mfg/value_functions.hpp"

namespace mfg {

/// Uniform partition of [0, T] whose step is at most epsilon / L (L the branch-objective
/// Lipschitz bound) and lands on base-grid nodes. Throws StepTooSmall when epsilon / L < dt.
[[nodiscard]] TimeGrid epsilon_partition(double epsilon, const Scenario& scenario);

/// Partition actually used for freezing decisions (the base grid when solver.epsilon == 0).
[[nodiscard]] TimeGrid decision_partition(const Scenario& scenario);

/// Split fractions per link and partition cell. The fraction applies to the preferred
/// decision only where the value field flags a tie at the cell start; elsewhere all agents
/// follow the single optimal decision.
struct SplitFunction {
    TimeGrid partition;
    std::vector<LinkArray> tie_fraction;

    [[nodiscard]] static SplitFunction uniform(const TimeGrid& partition, double fraction);
};

/// Everything produced by one application of the fixed-point map.
struct PsiEvaluation {
    ValueField field;
    PathCostTrajectory path_costs;
    PreferenceTrajectory preferences;
    MassEvolution mass;
};

/// Per-cell controls induced by `field` under `split` (decisions frozen per partition cell).
[[nodiscard]] std::vector<CellPolicy> flow_policy(const ValueField& field, const SplitFunction& split,
                                                  const Scenario& scenario);

[[nodiscard]] PsiEvaluation evaluate_psi(const MassTrajectory& rho, const SplitFunction& split,
                                         const Scenario& scenario);
[[nodiscard]] MassTrajectory apply_psi(const MassTrajectory& rho, const SplitFunction& split,
                                       const Scenario& scenario);

struct TieRecord {
    Link link;
    std::size_t node;
};

struct EquilibriumResult {
    MassTrajectory rho;
    PreferenceTrajectory preferences;
    ValueField field;
    SampledFunction arrivals;
    std::vector<double> residual_history;
    std::vector<double> damping_history;
    std::vector<TieRecord> ties;
    std::vector<std::size_t> origin_ties;
    bool converged = false;

    [[nodiscard]] std::size_t iterations() const noexcept { return residual_history.size(); }
};

/// Damped Picard iteration on psi from rho = 0. The first step is taken undamped; afterwards
/// gamma is halved whenever 10 consecutive iterations fail to improve on the best residual
/// seen since the last halving,
/// giving up below 1/64. Non-convergence is reported through `converged`.
[[nodiscard]] EquilibriumResult find_equilibrium(const Scenario& scenario);
[[nodiscard]] EquilibriumResult find_equilibrium(const Scenario& scenario, const SolverConfig& cfg);

}  // namespace mfg
