#include "mfg/scenario.hpp"

#include <numeric>
#include <sstream>
#include <string>

namespace mfg {

namespace {

void require(bool ok, const std::string& rule) {
    if (!ok) throw Error(ErrorCode::ValidationError, "rule violated: " + rule);
}

void validate_congestion(const CongestionParams& params) {
    for (Link e : kAllLinks) {
        require(params.slope[index(e)] >= 0.0 && std::isfinite(params.slope[index(e)]),
                "alpha_prime >= 0 (" + std::string(link_name(e)) + ")");
        require(params.offset[index(e)] >= 0.0 && std::isfinite(params.offset[index(e)]),
                "alpha_second >= 0 (" + std::string(link_name(e)) + ")");
    }
}

}  // namespace

double Scenario::mass_lipschitz() const noexcept {
    const auto& caps = network.capacities();
    return lambda.rate.max() + std::accumulate(caps.begin(), caps.end(), 0.0);
}

Scenario make_scenario(const ScenarioInputs& in) {
    require(in.horizon > 0.0 && std::isfinite(in.horizon), "horizon > 0");
    require(in.cells >= 2, "grid_points >= 2");
    require(in.beta >= 0.0 && std::isfinite(in.beta), "beta >= 0");
    require(in.eta > 0.0 && std::isfinite(in.eta), "eta > 0");
    require(in.alpha > 0.0 && std::isfinite(in.alpha), "alpha > 0");
    require(in.rho_max > 0.0 && std::isfinite(in.rho_max), "rho_max > 0");
    validate_congestion(in.congestion);
    const auto& s = in.solver;
    require(s.tol > 0.0, "solver.tol > 0");
    require(s.max_iter >= 1, "solver.max_iter >= 1");
    require(s.damping > 0.0 && s.damping <= 1.0, "solver.damping in (0, 1]");
    require(s.epsilon >= 0.0, "solver.epsilon >= 0");
    require(s.tie_tolerance >= 0.0, "solver.tie_tolerance >= 0");
    require(s.split_fraction >= 0.0 && s.split_fraction <= 1.0, "solver.split_fraction in [0, 1]");
    if (in.z0) {
        for (double v : *in.z0) require(v >= 0.0 && std::isfinite(v), "z0 >= 0");
    }

    Network network = build_network(in.lengths, in.capacities);
    TimeGrid grid(in.horizon, in.cells);
    Throughput lambda = sample_throughput(in.throughput, grid);
    require(lambda.rate.max() <= in.rho_max, "lambda <= rho_max");

    return Scenario{network, grid,       in.throughput, std::move(lambda), in.beta, in.eta, in.alpha,
                    in.congestion, in.rho_max, in.z0,     in.solver};
}

Scenario with_congestion(const Scenario& base, const CongestionParams& params) {
    validate_congestion(params);
    Scenario out = base;
    out.congestion = params;
    return out;
}

}  // namespace mfg
