#include "mfg/mass.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace mfg {

namespace {

std::pair<double, double> proportional_split(double a, double b) {
    const double total = a + b;
    if (total > 0.0) return {a / total, b / total};
    return {0.5, 0.5};
}

}  // namespace

LinkArray local_decision(const PathArray& z, const Network& network) {
    const LinkArray y = path_flow(network, z);
    LinkArray g{};
    std::tie(g[0], g[1]) = proportional_split(y[0], y[1]);
    std::tie(g[2], g[3]) = proportional_split(y[2], y[3]);
    g[4] = 1.0;
    return g;
}

LinkArray link_flows(const LinkArray& rho, const std::array<LinkDecision, kLinkCount>& decisions,
                     const Network& network) {
    LinkArray f{};
    for (Link e : kAllLinks) {
        const std::size_t i = index(e);
        if (decisions[i].mode == Mode::stay) continue;
        const double raw = std::max(rho[i], 0.0) * decisions[i].control / network.length(e);
        f[i] = std::clamp(raw, 0.0, network.capacity(e));
    }
    return f;
}

LinkArray blended_flows(const LinkArray& rho, const CellPolicy& policy, const Network& network) {
    LinkArray f = link_flows(rho, policy.primary, network);
    bool blended = false;
    for (double w : policy.weight) blended = blended || w < 1.0;
    if (!blended) return f;
    const LinkArray g = link_flows(rho, policy.alternate, network);
    for (std::size_t e = 0; e < kLinkCount; ++e) {
        const double w = policy.weight[e];
        if (w < 1.0) f[e] = w * f[e] + (1.0 - w) * g[e];
    }
    return f;
}

LinkArray mass_rhs(const LinkArray& f, const PathArray& z, double lambda_t, const Network& network) {
    const LinkArray g = local_decision(z, network);
    return {
        g[0] * lambda_t - f[0],
        g[1] * lambda_t - f[1],
        g[2] * f[0] - f[2],
        g[3] * f[0] - f[3],
        g[4] * (f[1] + f[2]) - f[4],
    };
}

MassEvolution evolve_mass(const PreferenceTrajectory& z, std::span<const CellPolicy> policy,
                          const SampledFunction& lambda, const Network& network, double rho_max) {
    const TimeGrid& grid = lambda.grid();
    if (!(z.grid == grid) || policy.size() != grid.cells()) {
        throw Error(ErrorCode::InvalidArgument, "mass evolution inputs are not on a shared grid");
    }
    MassEvolution out{MassTrajectory(grid), SampledFunction(grid)};

    // State: five link masses followed by the cumulative arrivals at d.
    State y(kLinkCount + 1, 0.0);
    const double h = grid.step();
    for (std::size_t k = 0; k < grid.cells(); ++k) {
        const CellPolicy& cell = policy[k];
        auto rhs = [&](double t, const State& s) {
            LinkArray rho{};
            for (std::size_t e = 0; e < kLinkCount; ++e) rho[e] = std::max(s[e], 0.0);
            const LinkArray f = blended_flows(rho, cell, network);
            PathArray zt = z.at(t);
            for (double& v : zt) v = std::max(v, 0.0);
            const LinkArray dr = mass_rhs(f, zt, lambda.at(t), network);
            State ds(kLinkCount + 1);
            std::copy(dr.begin(), dr.end(), ds.begin());
            ds[kLinkCount] = f[3] + f[4];
            return ds;
        };
        y = rk4_step(rhs, grid.node(k), y, h);
        require_finite(y, grid.node(k + 1));
        for (std::size_t e = 0; e < kLinkCount; ++e) {
            y[e] = std::max(y[e], 0.0);
            if (y[e] > rho_max) {
                std::ostringstream msg;
                msg << "rho_" << link_name(kAllLinks[e]) << "(" << grid.node(k + 1) << ") = " << y[e]
                    << " exceeds rho_max = " << rho_max;
                throw Error(ErrorCode::MassOverflow, msg.str());
            }
            out.rho.rho[k + 1][e] = y[e];
        }
        out.arrivals[k + 1] = y[kLinkCount];
    }
    return out;
}

}  // namespace mfg
