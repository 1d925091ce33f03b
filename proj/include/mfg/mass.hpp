#pragma once

#include <span>
#include <vector>

#include "mfg/network.hpp"
#include "mfg/state.hpp"
#include "mfg/value_functions.hpp"

namespace mfg {

/// Per-node split fractions of outflow, proportional to y = A z and uniform on zero flow.
/// Throws NegativePreference.
[[nodiscard]] LinkArray local_decision(const PathArray& z, const Network& network);

/// f_e = rho_e u_e / l_e clamped to [0, C_e]; staying contributes no flow.
[[nodiscard]] LinkArray link_flows(const LinkArray& rho, const std::array<LinkDecision, kLinkCount>& decisions,
                                   const Network& network);

/// Right-hand side H(f, z) of the mass-conservation system.
[[nodiscard]] LinkArray mass_rhs(const LinkArray& flows, const PathArray& z, double lambda_t,
                                 const Network& network);

/// Controls applied during one base cell. Where `weight[e] < 1` the flow of link e is the
/// convex blend weight * f(primary) + (1 - weight) * f(alternate).
struct CellPolicy {
    std::array<LinkDecision, kLinkCount> primary{};
    std::array<LinkDecision, kLinkCount> alternate{};
    LinkArray weight{1.0, 1.0, 1.0, 1.0, 1.0};
};

[[nodiscard]] LinkArray blended_flows(const LinkArray& rho, const CellPolicy& policy, const Network& network);

struct MassEvolution {
    MassTrajectory rho;
    SampledFunction arrivals;  ///< cumulative outflow into d
};

/// RK4 forward integration of rho' = H(f, z) from rho(0) = 0; `policy` has one entry per cell.
/// Throws MassOverflow when any rho_e exceeds rho_max.
[[nodiscard]] MassEvolution evolve_mass(const PreferenceTrajectory& z, std::span<const CellPolicy> policy,
                                        const SampledFunction& lambda, const Network& network, double rho_max);

}  // namespace mfg
