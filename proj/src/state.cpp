#include "mfg/state.hpp"

#include <algorithm>
#include <cmath>

namespace mfg {

SampledFunction MassTrajectory::link(Link e) const {
    std::vector<double> values(rho.size());
    for (std::size_t k = 0; k < rho.size(); ++k) values[k] = rho[k][index(e)];
    return SampledFunction(grid, std::move(values));
}

namespace {

template <typename Array>
Array interpolate(const TimeGrid& grid, const std::vector<Array>& samples, double t) {
    const auto [k, w] = grid.locate(t);
    if (w == 0.0) return samples[k];
    if (w == 1.0) return samples[k + 1];
    Array out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples[k][i] + w * (samples[k + 1][i] - samples[k][i]);
    return out;
}

}  // namespace

LinkArray MassTrajectory::at(double t) const { return interpolate(grid, rho, t); }

PathArray PreferenceTrajectory::at(double t) const { return interpolate(grid, z, t); }

double sup_distance(const MassTrajectory& a, const MassTrajectory& b) {
    if (!(a.grid == b.grid)) {
        throw Error(ErrorCode::InvalidArgument, "mass trajectories live on different grids");
    }
    double out = 0.0;
    for (std::size_t k = 0; k < a.rho.size(); ++k) {
        for (std::size_t e = 0; e < kLinkCount; ++e) out = std::max(out, std::abs(a.rho[k][e] - b.rho[k][e]));
    }
    return out;
}

double admissibility_violation(const MassTrajectory& rho, const MassBounds& bounds) {
    double worst = 0.0;
    const double h = rho.grid.step();
    for (std::size_t k = 0; k < rho.rho.size(); ++k) {
        for (std::size_t e = 0; e < kLinkCount; ++e) {
            const double v = rho.rho[k][e];
            worst = std::max({worst, -v, v - bounds.rho_max});
            if (k + 1 < rho.rho.size()) {
                const double slope = std::abs(rho.rho[k + 1][e] - v) / h;
                worst = std::max(worst, slope - bounds.lipschitz);
            }
        }
    }
    return worst;
}

}  // namespace mfg
