#include "mfg/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace mfg {

TimeGrid epsilon_partition(double epsilon, const Scenario& scenario) {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    const TimeGrid& base = scenario.grid;
    const double lipschitz = value_lipschitz_bound(scenario);
    const double step = epsilon / lipschitz;
    if (step < base.step() * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "epsilon / L = " << step << " is below the base step " << base.step()
            << "; refine the base grid (grid_points)";
        throw Error(ErrorCode::StepTooSmall, msg.str());
    }
    // Fewest cells keeping the step <= epsilon / L, rounded up to a divisor of N so that
    // every partition node is a base node.
    const double wanted = std::ceil(base.horizon() / step - 1e-9);
    std::size_t cells = static_cast<std::size_t>(std::max(1.0, std::min(wanted, double(base.cells()))));
    while (base.cells() % cells != 0) ++cells;
    return TimeGrid(base.horizon(), cells);
}

TimeGrid decision_partition(const Scenario& scenario) {
    if (scenario.solver.epsilon > 0.0) return epsilon_partition(scenario.solver.epsilon, scenario);
    return scenario.grid;
}

SplitFunction SplitFunction::uniform(const TimeGrid& partition, double fraction) {
    LinkArray row{};
    row.fill(fraction);
    return SplitFunction{partition, std::vector<LinkArray>(partition.cells(), row)};
}

std::vector<CellPolicy> flow_policy(const ValueField& field, const SplitFunction& split, const Scenario& scenario) {
    const TimeGrid& base = scenario.grid;
    const std::size_t stride = base.cells() / split.partition.cells();
    if (stride * split.partition.cells() != base.cells() || split.tie_fraction.size() != split.partition.cells()) {
        throw Error(ErrorCode::InvalidArgument, "split partition does not refine onto the base grid");
    }
    std::vector<CellPolicy> policy(base.cells());
    for (std::size_t k = 0; k < base.cells(); ++k) {
        const std::size_t cell = k / stride;
        const std::size_t node = cell * stride;
        CellPolicy& p = policy[k];
        for (Link e : kAllLinks) {
            const LinkDecision& d = field.decision(e, node);
            p.primary[index(e)] = d;
            p.alternate[index(e)] = stay_decision(d.value);
            p.weight[index(e)] = d.tie ? split.tie_fraction[cell][index(e)] : 1.0;
        }
    }
    return policy;
}

PsiEvaluation evaluate_psi(const MassTrajectory& rho, const SplitFunction& split, const Scenario& scenario) {
    const TimeGrid& grid = scenario.grid;
    ValueField field = value_field(rho, scenario);

    const CongestionIntegrals costs(rho, scenario.congestion);
    const CostContext ctx{scenario.network, scenario.alpha, grid.horizon()};
    PathCostTrajectory path_costs{SampledFunction(grid), SampledFunction(grid), SampledFunction(grid)};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const PathArray j = path_cost_vector(grid.node(k), field, costs, ctx);
        for (std::size_t p = 0; p < kPathCount; ++p) path_costs[p][k] = j[p];
    }

    PreferenceTrajectory preferences =
        evolve_preferences({path_costs, scenario.lambda, scenario.z0, scenario.eta, scenario.beta});

    const std::vector<CellPolicy> policy = flow_policy(field, split, scenario);
    MassEvolution mass = evolve_mass(preferences, policy, scenario.lambda.rate, scenario.network, scenario.rho_max);
    return PsiEvaluation{std::move(field), std::move(path_costs), std::move(preferences), std::move(mass)};
}

MassTrajectory apply_psi(const MassTrajectory& rho, const SplitFunction& split, const Scenario& scenario) {
    return evaluate_psi(rho, split, scenario).mass.rho;
}

EquilibriumResult find_equilibrium(const Scenario& scenario) { return find_equilibrium(scenario, scenario.solver); }

EquilibriumResult find_equilibrium(const Scenario& scenario, const SolverConfig& cfg) {
    constexpr std::size_t kStallLimit = 10;
    constexpr double kMinDamping = 1.0 / 64.0;
    if (cfg.max_iter < 1 || !(cfg.damping > 0.0 && cfg.damping <= 1.0) || !(cfg.tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "solver needs max_iter >= 1, damping in (0, 1], tol > 0");
    }

    const SplitFunction split = SplitFunction::uniform(decision_partition(scenario), cfg.split_fraction);
    MassTrajectory rho(scenario.grid);
    double gamma = cfg.damping;
    double best = std::numeric_limits<double>::infinity();
    std::size_t stall = 0;

    std::vector<double> residuals;
    std::vector<double> dampings;
    bool converged = false;
    std::optional<PsiEvaluation> last;
    MassTrajectory evaluated_at = rho;

    for (std::size_t it = 0; it < cfg.max_iter; ++it) {
        PsiEvaluation eval = evaluate_psi(rho, split, scenario);
        const double residual = sup_distance(eval.mass.rho, rho);
        residuals.push_back(residual);
        evaluated_at = rho;

        if (residual <= cfg.tol) {
            dampings.push_back(0.0);
            last = std::move(eval);
            converged = true;
            break;
        }

        const double step = it == 0 ? 1.0 : gamma;
        dampings.push_back(step);
        for (std::size_t k = 0; k < rho.rho.size(); ++k) {
            for (std::size_t e = 0; e < kLinkCount; ++e) {
                rho.rho[k][e] = (1.0 - step) * rho.rho[k][e] + step * eval.mass.rho.rho[k][e];
            }
        }
        last = std::move(eval);

        // Progress is measured against the best residual since the last restart.
        if (residual < best) {
            best = residual;
            stall = 0;
        } else if (++stall >= kStallLimit) {
            gamma *= 0.5;
            stall = 0;
            best = std::numeric_limits<double>::infinity();
            if (gamma < kMinDamping) break;
        }
    }

    EquilibriumResult out{std::move(evaluated_at),
                          std::move(last->preferences),
                          std::move(last->field),
                          std::move(last->mass.arrivals),
                          std::move(residuals),
                          std::move(dampings),
                          {},
                          {},
                          converged};
    for (Link e : kAllLinks) {
        for (std::size_t k = 0; k < out.field.grid.size(); ++k) {
            if (out.field.decision(e, k).tie) out.ties.push_back({e, k});
        }
    }
    for (std::size_t k = 0; k < out.field.origin_tie.size(); ++k) {
        if (out.field.origin_tie[k]) out.origin_ties.push_back(k);
    }
    return out;
}

}  // namespace mfg
