#include "mfg/preferences.hpp"

#include <algorithm>
#include <cmath>

namespace mfg {

PathArray logit_weights(const PathArray& costs, double beta) {
    const double lowest = *std::min_element(costs.begin(), costs.end());
    PathArray w{};
    double total = 0.0;
    for (std::size_t p = 0; p < kPathCount; ++p) {
        w[p] = std::exp(-beta * (costs[p] - lowest));
        total += w[p];
    }
    for (double& v : w) v /= total;
    return w;
}

PathArray perturbed_best_response(const PathArray& costs, double lambda_t, double beta) {
    PathArray out = logit_weights(costs, beta);
    for (double& v : out) v *= lambda_t;
    return out;
}

PathArray rate_response(const PathArray& costs, double lambda_rate, double beta) {
    PathArray out = logit_weights(costs, beta);
    for (double& v : out) v *= lambda_rate;
    return out;
}

Projection project_to_simplex(const PathArray& z, double lambda_t) {
    Projection out{z, false, false};
    double total = 0.0;
    bool negative = false;
    for (double v : z) {
        negative = negative || v < 0.0;
        total += std::max(v, 0.0);
    }
    if (!negative && std::abs(total - lambda_t) <= 1e-14 * std::max(1.0, lambda_t)) return out;

    out.changed = true;
    if (lambda_t <= 0.0) {
        out.z = PathArray{};
        out.degenerate = true;
        return out;
    }
    if (total <= 0.0) {
        out.z.fill(lambda_t / static_cast<double>(kPathCount));
        return out;
    }
    for (double& v : out.z) v = std::max(v, 0.0) * (lambda_t / total);
    return out;
}

PreferenceTrajectory evolve_preferences(const PreferenceInputs& in) {
    const TimeGrid& grid = in.lambda.rate.grid();
    PreferenceTrajectory out(grid);

    const double lambda0 = in.lambda.rate[0];
    PathArray start{};
    start.fill(lambda0 / static_cast<double>(kPathCount));
    if (in.z0) start = *in.z0;
    const Projection initial = project_to_simplex(start, lambda0);
    out.z[0] = initial.z;
    out.initial_projected = in.z0.has_value() && initial.changed;
    if (initial.degenerate) out.degenerate_nodes.push_back(0);

    auto rhs = [&](double t, const State& y) {
        PathArray costs{};
        for (std::size_t p = 0; p < kPathCount; ++p) costs[p] = in.costs[p].at(t);
        const PathArray weights = logit_weights(costs, in.beta);
        const double forcing = in.lambda.rate.at(t) + in.lambda.derivative.at(t);
        State dz(kPathCount);
        for (std::size_t p = 0; p < kPathCount; ++p) dz[p] = in.eta * (forcing * weights[p] - y[p]);
        return dz;
    };

    const double h = grid.step();
    for (std::size_t k = 0; k < grid.cells(); ++k) {
        const State y(out.z[k].begin(), out.z[k].end());
        const State next = rk4_step(rhs, grid.node(k), y, h);
        require_finite(next, grid.node(k + 1));
        const Projection proj = project_to_simplex({next[0], next[1], next[2]}, in.lambda.rate[k + 1]);
        out.z[k + 1] = proj.z;
        if (proj.degenerate) out.degenerate_nodes.push_back(k + 1);
    }
    return out;
}

}  // namespace mfg
