#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "mfg/scenario.hpp"
#include "mfg/state.hpp"

namespace mfg::testing {

/// Unit-length symmetric network, T = 2, constant unit throughput, no congestion.
inline ScenarioInputs unit_inputs(std::size_t cells = 200) {
    ScenarioInputs in;
    in.lengths = {1, 1, 1, 1, 1};
    in.capacities = {10, 10, 10, 10, 10};
    in.horizon = 2.0;
    in.cells = cells;
    in.throughput = ConstantThroughput{1.0};
    in.beta = 1.0;
    in.eta = 1.0;
    in.alpha = 1.0;
    in.rho_max = 100.0;
    return in;
}

inline Scenario unit_scenario(std::size_t cells = 200) { return make_scenario(unit_inputs(cells)); }

/// Congested desk scenario: bump throughput of peak 2, alpha' = 0.05 on every link.
inline ScenarioInputs desk_inputs(std::size_t cells = 400) {
    ScenarioInputs in = unit_inputs(cells);
    in.throughput = BumpThroughput{2.0, 0.0, 3.5};
    in.beta = 5.0;
    in.congestion.slope = {0.05, 0.05, 0.05, 0.05, 0.05};
    in.rho_max = 10.0;
    in.solver.tol = 1e-6;
    in.solver.damping = 0.5;
    return in;
}

/// Random walk with slopes bounded by the admissible Lipschitz constant, clamped to [0, rho_cap].
inline MassTrajectory random_mass(const Scenario& scenario, unsigned seed, double rho_cap) {
    std::mt19937_64 rng(seed);
    const double slope = std::min(scenario.mass_lipschitz(), 4.0 * rho_cap / scenario.grid.horizon());
    std::uniform_real_distribution<double> step(-slope, slope);
    MassTrajectory rho(scenario.grid);
    const double h = scenario.grid.step();
    for (std::size_t k = 1; k < rho.rho.size(); ++k) {
        for (std::size_t e = 0; e < kLinkCount; ++e) {
            rho.rho[k][e] = std::clamp(rho.rho[k - 1][e] + step(rng) * h, 0.0, rho_cap);
        }
    }
    return rho;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("mfg_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace mfg::testing
