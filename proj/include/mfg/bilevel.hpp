#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mfg/equilibrium.hpp"

namespace mfg {

/// Compact box K of admissible congestion parameters.
struct ParamBox {
    CongestionParams lower;
    CongestionParams upper;

    /// Throws InvalidArgument unless 0 <= lower <= upper componentwise.
    void validate() const;
    [[nodiscard]] CongestionParams center() const;
    [[nodiscard]] CongestionParams project(const CongestionParams& p) const;
    [[nodiscard]] bool contains(const CongestionParams& p) const;
};

struct ObjectiveValue {
    double objective = 0.0;  ///< +inf when the inner solve overflowed
    bool converged = false;
    std::optional<EquilibriumResult> equilibrium;
};

/// sup-norm distance between the equilibrium mass at `params` and `reference`.
/// MassOverflow in the inner solve yields converged = false and objective = +inf.
[[nodiscard]] ObjectiveValue bilevel_objective(const CongestionParams& params, const MassTrajectory& reference,
                                               const Scenario& scenario);

enum class SearchMethod { grid, pattern };

[[nodiscard]] SearchMethod parse_search_method(std::string_view name);

struct SearchConfig {
    std::size_t budget = 200;
    SearchMethod method = SearchMethod::pattern;
};

struct Candidate {
    CongestionParams params;
    double objective = 0.0;
    bool converged = false;
};

struct BilevelResult {
    CongestionParams best;
    double objective = 0.0;
    std::vector<Candidate> log;
    std::optional<EquilibriumResult> best_equilibrium;

    [[nodiscard]] std::size_t evaluations() const noexcept { return log.size(); }
};

/// Derivative-free search over K. Throws InvalidArgument when budget == 0 and
/// NoConvergedCandidate when no inner solve converges.
[[nodiscard]] BilevelResult optimize_params(const ParamBox& box, const MassTrajectory& reference,
                                            const Scenario& scenario, const SearchConfig& cfg);

}  // namespace mfg
