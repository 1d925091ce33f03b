#pragma once

// Fixed inputs shared by unit and acceptance tests.

#include <array>

#include "mfg/scenario.hpp"
#include "test_support.hpp"

namespace mfg::testing {

struct OracleCase {
    LinkArray lengths;
    double alpha;
    LinkArray slope;
    LinkArray offset;
    unsigned seed;
};

/// Three coarse-grid value-oracle cases (N = 40, T = 2, rho_max = 5).
inline constexpr std::array<OracleCase, 3> kOracleCases{{
    {{1.0, 1.2, 0.7, 0.9, 1.1}, 1.0, {0.10, 0.05, 0.20, 0.00, 0.15}, {0.00, 0.10, 0.05, 0.20, 0.00}, 11u},
    {{0.6, 0.8, 1.3, 1.0, 0.5}, 2.0, {0.30, 0.20, 0.00, 0.10, 0.25}, {0.05, 0.00, 0.10, 0.00, 0.30}, 23u},
    {{1.4, 0.9, 0.5, 1.2, 0.8}, 0.6, {0.00, 0.40, 0.10, 0.30, 0.05}, {0.20, 0.00, 0.00, 0.05, 0.10}, 37u},
}};

inline Scenario oracle_scenario(const OracleCase& c) {
    ScenarioInputs in = unit_inputs(40);
    in.lengths = c.lengths;
    in.alpha = c.alpha;
    in.congestion.slope = c.slope;
    in.congestion.offset = c.offset;
    in.rho_max = 5.0;
    return make_scenario(in);
}

}  // namespace mfg::testing
