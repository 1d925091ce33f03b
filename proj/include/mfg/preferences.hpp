#pragma once

#include <array>
#include <optional>

#include "mfg/network.hpp"
#include "mfg/numerics.hpp"
#include "mfg/state.hpp"

namespace mfg {

/// softmax(-beta J), evaluated with the minimum cost subtracted first.
[[nodiscard]] PathArray logit_weights(const PathArray& costs, double beta);

/// lambda_t * softmax(-beta J).
[[nodiscard]] PathArray perturbed_best_response(const PathArray& costs, double lambda_t, double beta);

/// lambda'_t * softmax(-beta J); shares the sign of lambda'_t.
[[nodiscard]] PathArray rate_response(const PathArray& costs, double lambda_rate, double beta);

struct Projection {
    PathArray z{};
    bool changed = false;
    bool degenerate = false;
};

/// Clamps negatives to zero and rescales so that 1'z = lambda_t. A no-op (bitwise) when z
/// is already nonnegative and sums to lambda_t within 1e-14 relative.
[[nodiscard]] Projection project_to_simplex(const PathArray& z, double lambda_t);

using PathCostTrajectory = std::array<SampledFunction, kPathCount>;

struct PreferenceInputs {
    const PathCostTrajectory& costs;
    const Throughput& lambda;
    std::optional<PathArray> z0;  ///< defaults to lambda(0) / 3 per path
    double eta = 1.0;
    double beta = 1.0;
};

/// RK4 integration of z' = eta (F + Q - z) with a projection onto the simplex after every step.
[[nodiscard]] PreferenceTrajectory evolve_preferences(const PreferenceInputs& in);

}  // namespace mfg
