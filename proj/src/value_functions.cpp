#include "mfg/value_functions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace mfg {

LinkDecision stay_decision(double value) { return LinkDecision{Mode::stay, 0.0, 0.0, value, false}; }

LinkDecision move_decision(double entry, double arrival, double length, double value) {
    return LinkDecision{Mode::move, arrival, length / (arrival - entry), value, false};
}

CongestionIntegrals::CongestionIntegrals(const MassTrajectory& rho, const CongestionParams& params) {
    costs_.reserve(kLinkCount);
    cumulative_.reserve(kLinkCount);
    for (Link e : kAllLinks) {
        std::vector<double> phi(rho.rho.size());
        for (std::size_t k = 0; k < phi.size(); ++k) phi[k] = params.cost(e, rho.rho[k][index(e)]);
        costs_.emplace_back(rho.grid, std::move(phi));
        cumulative_.emplace_back(costs_.back());
    }
}

double link_cost(Link e, double t, const LinkDecision& decision, const CongestionIntegrals& costs,
                 const CostContext& ctx) {
    if (decision.mode == Mode::stay) {
        return costs.integral(e, t, ctx.horizon) + ctx.alpha * ctx.network.penalty_length(e);
    }
    if (!(decision.arrival > t) || decision.arrival > ctx.horizon * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "move on " << link_name(e) << " entered at " << t << " arrives at " << decision.arrival;
        throw Error(ErrorCode::InvalidDecision, msg.str());
    }
    const double l = ctx.network.length(e);
    return 0.5 * l * l / (decision.arrival - t) + costs.integral(e, t, decision.arrival);
}

double link_cost(Link e, double t, const LinkDecision& decision, const MassTrajectory& rho,
                 const Scenario& scenario) {
    const CongestionIntegrals costs(rho, scenario.congestion);
    return link_cost(e, t, decision, costs, CostContext{scenario.network, scenario.alpha, scenario.grid.horizon()});
}

namespace {

struct MoveCandidate {
    double arrival = 0.0;
    double cost = std::numeric_limits<double>::infinity();
};

using Continuation = std::function<double(double)>;
using NodeContinuation = std::function<double(std::size_t)>;

/// inf over tau in (t_k, T] of l^2 / (2 (tau - t)) + int_t^tau phi + next(tau): scan the
/// grid nodes, then refine around the best node with golden-section search.
MoveCandidate best_move(Link e, std::size_t k, const TimeGrid& grid, double length,
                        const CongestionIntegrals& costs, const Continuation& next,
                        const NodeContinuation& next_at_node) {
    const double t = grid.node(k);
    const double half_sq = 0.5 * length * length;
    MoveCandidate best;
    std::size_t best_node = k + 1;
    for (std::size_t j = k + 1; j < grid.size(); ++j) {
        const double tau = grid.node(j);
        const double c = half_sq / (tau - t) + costs.integral(e, t, tau) + next_at_node(j);
        if (c < best.cost) {
            best = {tau, c};
            best_node = j;
        }
    }
    const double lo = grid.node(best_node - 1);
    const double hi = grid.node(std::min(best_node + 1, grid.cells()));
    auto objective = [&](double tau) { return half_sq / (tau - t) + costs.integral(e, t, tau) + next(tau); };
    const auto [tau, c] = golden_section_minimize(objective, lo, hi, 1e-11 * grid.horizon());
    if (c < best.cost) best = {tau, c};
    return best;
}

/// Resolves stay versus move; ties within `tie_tol` prefer move.
LinkDecision choose(double t, double length, double stay_cost, const MoveCandidate& move, double tie_tol) {
    const double value = std::min(stay_cost, move.cost);
    if (std::isfinite(move.cost) && move.cost <= stay_cost + tie_tol) {
        LinkDecision d = move_decision(t, move.arrival, length, value);
        d.tie = std::abs(move.cost - stay_cost) <= tie_tol;
        return d;
    }
    return stay_decision(value);
}

}  // namespace

ValueField value_field(const MassTrajectory& rho, const Scenario& scenario) {
    const TimeGrid& grid = scenario.grid;
    if (!(rho.grid == grid)) {
        throw Error(ErrorCode::InvalidArgument, "mass trajectory grid differs from scenario grid");
    }
    const Network& net = scenario.network;
    const double horizon = grid.horizon();
    const double alpha = scenario.alpha;
    const double tie_tol = scenario.solver.tie_tolerance;
    const CongestionIntegrals costs(rho, scenario.congestion);

    ValueField field{grid,
                     {SampledFunction(grid), SampledFunction(grid), SampledFunction(grid), SampledFunction(grid),
                      SampledFunction(grid)},
                     {},
                     SampledFunction(grid),
                     std::vector<Link>(grid.size(), Link::e1),
                     std::vector<bool>(grid.size(), false)};
    for (auto& d : field.decisions) d.resize(grid.size());

    auto store = [&](Link e, std::size_t k, const LinkDecision& d) {
        field.decisions[index(e)][k] = d;
        field.values[index(e)][k] = d.value;
    };

    // Terminal links: stay, or move so as to reach d exactly at T.
    for (Link e : {Link::e4, Link::e5}) {
        const double l = net.length(e);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid.node(k);
            const double congestion = costs.integral(e, t, horizon);
            const double stay = alpha * net.penalty_length(e) + congestion;
            MoveCandidate move;
            if (k < grid.cells()) move = {horizon, 0.5 * l * l / (horizon - t) + congestion};
            store(e, k, choose(t, l, stay, move, tie_tol));
        }
    }

    auto inner = [&](Link e, const Continuation& next, const NodeContinuation& next_at_node) {
        const double l = net.length(e);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid.node(k);
            const double stay = alpha * net.penalty_length(e) + costs.integral(e, t, horizon);
            MoveCandidate move;
            if (k < grid.cells()) move = best_move(e, k, grid, l, costs, next, next_at_node);
            store(e, k, choose(t, l, stay, move, tie_tol));
        }
    };

    const SampledFunction& v3 = field.values[index(Link::e3)];
    const SampledFunction& v4 = field.values[index(Link::e4)];
    const SampledFunction& v5 = field.values[index(Link::e5)];
    inner(Link::e3, [&](double tau) { return v5.at(tau); }, [&](std::size_t j) { return v5[j]; });
    inner(Link::e1, [&](double tau) { return std::min(v3.at(tau), v4.at(tau)); },
          [&](std::size_t j) { return std::min(v3[j], v4[j]); });
    inner(Link::e2, [&](double tau) { return v5.at(tau); }, [&](std::size_t j) { return v5[j]; });

    const SampledFunction& v1 = field.values[index(Link::e1)];
    const SampledFunction& v2 = field.values[index(Link::e2)];
    for (std::size_t k = 0; k < grid.size(); ++k) {
        field.origin_value[k] = std::min(v1[k], v2[k]);
        field.origin_choice[k] = v1[k] <= v2[k] + tie_tol ? Link::e1 : Link::e2;
        field.origin_tie[k] = std::abs(v1[k] - v2[k]) <= tie_tol;
    }
    return field;
}

LinkDecision ValueField::decision_at(Link e, double s, const Network& network) const {
    const double horizon = grid.horizon();
    if (s >= horizon) return stay_decision(values[index(e)][grid.cells()]);
    const auto [k, w] = grid.locate(s);
    const auto& column = decisions[index(e)];
    if (w == 0.0) return column[k];
    const LinkDecision& left = column[k];
    const LinkDecision& right = column[k + 1];
    const double l = network.length(e);
    if (left.mode == Mode::move && right.mode == Mode::move) {
        const double tau = std::min(left.arrival + w * (right.arrival - left.arrival), horizon);
        LinkDecision d = move_decision(s, tau, l, left.value + w * (right.value - left.value));
        d.tie = left.tie || right.tie;
        return d;
    }
    // Mixed modes: take the nearer node, keeping its travel duration for a move.
    const std::size_t nearer = w <= 0.5 ? k : k + 1;
    const LinkDecision& src = column[nearer];
    if (src.mode == Mode::stay) return src;
    const double duration = src.arrival - grid.node(nearer);
    LinkDecision d = move_decision(s, std::min(s + duration, horizon), l, src.value);
    d.tie = src.tie;
    return d;
}

PathArray path_cost_vector(double t, const ValueField& field, const CongestionIntegrals& costs,
                           const CostContext& ctx) {
    PathArray out{};
    const double entry0 = std::clamp(t, 0.0, ctx.horizon);
    for (std::size_t p = 0; p < kPathCount; ++p) {
        double entry = entry0;
        double total = 0.0;
        for (Link e : Network::path(p)) {
            const LinkDecision d = field.decision_at(e, entry, ctx.network);
            total += link_cost(e, entry, d, costs, ctx);
            if (d.mode == Mode::stay) break;
            entry = std::min(d.arrival, ctx.horizon);
        }
        out[p] = total;
    }
    return out;
}

PathArray path_cost_vector(double t, const ValueField& field, const MassTrajectory& rho, const Scenario& scenario) {
    const CongestionIntegrals costs(rho, scenario.congestion);
    return path_cost_vector(t, field, costs, CostContext{scenario.network, scenario.alpha, scenario.grid.horizon()});
}

namespace {

double worst_case_cost(Link e, const Scenario& scenario) {
    return scenario.alpha * scenario.network.penalty_length(e) +
           scenario.grid.horizon() * scenario.max_congestion_cost() + scenario.solver.tie_tolerance;
}

}  // namespace

double control_bound(Link e, const Scenario& scenario) {
    return 2.0 * worst_case_cost(e, scenario) / scenario.network.length(e);
}

double value_lipschitz_bound(const Scenario& scenario) {
    // A move that is optimal costs at most the stay branch, so its duration is at least
    // l^2 / (2 M); the kinetic term then changes with t at rate at most 2 M^2 / l^2.
    // The factor 2 absorbs the one-cell lag of a finite-difference estimate.
    double out = 0.0;
    for (Link e : kAllLinks) {
        const double m = worst_case_cost(e, scenario);
        const double l = scenario.network.length(e);
        out = std::max(out, 4.0 * m * m / (l * l));
    }
    return out + scenario.max_congestion_cost();
}

}  // namespace mfg
