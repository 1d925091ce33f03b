#pragma once

#include <algorithm>

#include "mfg/network.hpp"

namespace mfg {

/// Linear congestion costs phi_e(rho) = slope_e * rho + offset_e with nonnegative coefficients.
struct CongestionParams {
    LinkArray slope{};
    LinkArray offset{};

    [[nodiscard]] double cost(Link e, double rho) const noexcept {
        return slope[index(e)] * rho + offset[index(e)];
    }

    /// Largest value any phi_e takes on [0, rho_max].
    [[nodiscard]] double max_cost(double rho_max) const noexcept {
        double out = 0.0;
        for (Link e : kAllLinks) out = std::max(out, cost(e, rho_max));
        return out;
    }

    friend bool operator==(const CongestionParams&, const CongestionParams&) = default;
};

}  // namespace mfg
