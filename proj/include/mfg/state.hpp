#pragma once

#include <vector>

#include "mfg/network.hpp"
#include "mfg/numerics.hpp"

namespace mfg {

/// Link masses rho_e(t_k) on a shared grid.
struct MassTrajectory {
    TimeGrid grid;
    std::vector<LinkArray> rho;

    explicit MassTrajectory(TimeGrid g) : grid(g), rho(g.size(), LinkArray{}) {}

    [[nodiscard]] SampledFunction link(Link e) const;
    [[nodiscard]] LinkArray at(double t) const;
};

/// Sup-norm distance over links and nodes. Both trajectories must share a grid.
[[nodiscard]] double sup_distance(const MassTrajectory& a, const MassTrajectory& b);

/// Bounds defining the admissible mass space: range [0, rho_max] and slope <= lipschitz.
struct MassBounds {
    double rho_max = 0.0;
    double lipschitz = 0.0;
};

/// Largest violation of the range or slope bounds (0 when rho is admissible).
[[nodiscard]] double admissibility_violation(const MassTrajectory& rho, const MassBounds& bounds);

/// Aggregate path preferences z(t_k) on the shared grid.
struct PreferenceTrajectory {
    TimeGrid grid;
    std::vector<PathArray> z;
    /// Nodes where lambda was zero but a projection was required.
    std::vector<std::size_t> degenerate_nodes;
    /// The supplied z0 was off the simplex and had to be projected.
    bool initial_projected = false;

    explicit PreferenceTrajectory(TimeGrid g) : grid(g), z(g.size(), PathArray{}) {}

    [[nodiscard]] PathArray at(double t) const;
};

}  // namespace mfg
