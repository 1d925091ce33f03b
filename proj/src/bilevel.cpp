#include "mfg/bilevel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace mfg {

namespace {

constexpr std::size_t kDims = 2 * kLinkCount;
using ParamVector = std::array<double, kDims>;

ParamVector flatten(const CongestionParams& p) {
    ParamVector v{};
    std::copy(p.slope.begin(), p.slope.end(), v.begin());
    std::copy(p.offset.begin(), p.offset.end(), v.begin() + kLinkCount);
    return v;
}

CongestionParams unflatten(const ParamVector& v) {
    CongestionParams p;
    std::copy(v.begin(), v.begin() + kLinkCount, p.slope.begin());
    std::copy(v.begin() + kLinkCount, v.end(), p.offset.begin());
    return p;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Evaluation bookkeeping shared by both search methods: caches repeated points and
/// keeps the best converged candidate.
class Evaluator {
public:
    Evaluator(const MassTrajectory& reference, const Scenario& scenario, std::size_t budget)
        : reference_(reference), scenario_(scenario), budget_(budget) {}

    [[nodiscard]] bool exhausted() const noexcept { return result_.log.size() >= budget_; }

    /// Objective at x, or +inf when the inner solve failed.
    double operator()(const ParamVector& x) {
        if (auto it = cache_.find(x); it != cache_.end()) return it->second;
        const CongestionParams params = unflatten(x);
        ObjectiveValue value = bilevel_objective(params, reference_, scenario_);
        result_.log.push_back({params, value.objective, value.converged});
        const double score = value.converged ? value.objective : kInf;
        if (value.converged && (!result_.best_equilibrium || value.objective < result_.objective)) {
            result_.best = params;
            result_.objective = value.objective;
            result_.best_equilibrium = std::move(value.equilibrium);
        }
        cache_.emplace(x, score);
        return score;
    }

    BilevelResult finish() && {
        if (!result_.best_equilibrium) {
            throw Error(ErrorCode::NoConvergedCandidate,
                        "none of the " + std::to_string(result_.log.size()) + " inner equilibrium solves converged");
        }
        return std::move(result_);
    }

private:
    const MassTrajectory& reference_;
    const Scenario& scenario_;
    std::size_t budget_;
    std::map<ParamVector, double> cache_;
    BilevelResult result_;
};

void grid_search(const ParamBox& box, Evaluator& eval, std::size_t budget) {
    const ParamVector lo = flatten(box.lower);
    const ParamVector hi = flatten(box.upper);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < kDims; ++i) {
        if (hi[i] > lo[i]) free.push_back(i);
    }
    std::size_t per_dim = 1;
    if (!free.empty()) {
        auto fits = [&](std::size_t r) {
            double total = 1.0;
            for (std::size_t i = 0; i < free.size(); ++i) total *= static_cast<double>(r);
            return total <= static_cast<double>(budget);
        };
        while (fits(per_dim + 1)) ++per_dim;
    }
    if (per_dim == 1) {
        eval(flatten(box.center()));
        return;
    }
    std::vector<std::size_t> counter(free.size(), 0);
    while (true) {
        ParamVector x = lo;
        for (std::size_t j = 0; j < free.size(); ++j) {
            const std::size_t i = free[j];
            x[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(counter[j]) / static_cast<double>(per_dim - 1);
        }
        eval(x);
        std::size_t j = 0;
        while (j < free.size() && ++counter[j] == per_dim) counter[j++] = 0;
        if (j == free.size()) break;
    }
}

/// Hooke-Jeeves: an exploratory sweep over every free coordinate, followed by a pattern
/// (extrapolation) move whenever the sweep improved; steps halve when nothing improves.
void pattern_search(const ParamBox& box, Evaluator& eval) {
    const ParamVector lo = flatten(box.lower);
    const ParamVector hi = flatten(box.upper);
    ParamVector step{};
    ParamVector min_step{};
    for (std::size_t i = 0; i < kDims; ++i) {
        step[i] = 0.25 * (hi[i] - lo[i]);
        min_step[i] = 1e-9 * (hi[i] - lo[i]);
    }

    auto explore = [&](ParamVector x, double fx) {
        for (std::size_t i = 0; i < kDims && !eval.exhausted(); ++i) {
            if (!(hi[i] > lo[i])) continue;
            for (double sign : {1.0, -1.0}) {
                ParamVector y = x;
                y[i] = std::clamp(x[i] + sign * step[i], lo[i], hi[i]);
                if (y[i] == x[i]) continue;
                const double fy = eval(y);
                if (fy < fx) {
                    x = y;
                    fx = fy;
                    break;
                }
                if (eval.exhausted()) break;
            }
        }
        return std::pair{x, fx};
    };

    ParamVector base = flatten(box.center());
    double f_base = eval(base);
    while (!eval.exhausted()) {
        auto [x, fx] = explore(base, f_base);
        if (fx < f_base) {
            // Keep extrapolating along the successful direction while it pays off.
            while (!eval.exhausted()) {
                ParamVector pattern{};
                for (std::size_t i = 0; i < kDims; ++i) pattern[i] = std::clamp(2.0 * x[i] - base[i], lo[i], hi[i]);
                base = x;
                f_base = fx;
                if (pattern == x) break;
                const double f_pattern = eval(pattern);
                if (eval.exhausted()) {
                    break;
                }
                auto [y, fy] = explore(pattern, f_pattern);
                if (!(fy < f_base)) break;
                x = y;
                fx = fy;
            }
            continue;
        }
        bool active = false;
        for (std::size_t i = 0; i < kDims; ++i) {
            step[i] *= 0.5;
            active = active || (hi[i] > lo[i] && step[i] >= min_step[i]);
        }
        if (!active) break;
    }
}

}  // namespace

void ParamBox::validate() const {
    const ParamVector lo = flatten(lower);
    const ParamVector hi = flatten(upper);
    for (std::size_t i = 0; i < kDims; ++i) {
        if (!(lo[i] >= 0.0) || !(hi[i] >= lo[i]) || !std::isfinite(hi[i])) {
            throw Error(ErrorCode::InvalidArgument, "parameter box needs 0 <= lower <= upper < inf componentwise");
        }
    }
}

CongestionParams ParamBox::center() const {
    const ParamVector lo = flatten(lower);
    const ParamVector hi = flatten(upper);
    ParamVector c{};
    for (std::size_t i = 0; i < kDims; ++i) c[i] = lo[i] == hi[i] ? lo[i] : 0.5 * (lo[i] + hi[i]);
    return unflatten(c);
}

CongestionParams ParamBox::project(const CongestionParams& p) const {
    const ParamVector lo = flatten(lower);
    const ParamVector hi = flatten(upper);
    ParamVector v = flatten(p);
    for (std::size_t i = 0; i < kDims; ++i) v[i] = std::clamp(v[i], lo[i], hi[i]);
    return unflatten(v);
}

bool ParamBox::contains(const CongestionParams& p) const {
    const ParamVector lo = flatten(lower);
    const ParamVector hi = flatten(upper);
    const ParamVector v = flatten(p);
    for (std::size_t i = 0; i < kDims; ++i) {
        if (v[i] < lo[i] || v[i] > hi[i]) return false;
    }
    return true;
}

ObjectiveValue bilevel_objective(const CongestionParams& params, const MassTrajectory& reference,
                                 const Scenario& scenario) {
    const Scenario candidate = with_congestion(scenario, params);
    try {
        EquilibriumResult eq = find_equilibrium(candidate);
        const double objective = sup_distance(eq.rho, reference);
        const bool converged = eq.converged;
        return ObjectiveValue{objective, converged, std::move(eq)};
    } catch (const Error& err) {
        if (err.code() != ErrorCode::MassOverflow) throw;
        return ObjectiveValue{kInf, false, std::nullopt};
    }
}

SearchMethod parse_search_method(std::string_view name) {
    if (name == "grid") return SearchMethod::grid;
    if (name == "pattern") return SearchMethod::pattern;
    throw Error(ErrorCode::InvalidArgument, "unknown search method '" + std::string(name) + "'");
}

BilevelResult optimize_params(const ParamBox& box, const MassTrajectory& reference, const Scenario& scenario,
                              const SearchConfig& cfg) {
    if (cfg.budget < 1) throw Error(ErrorCode::InvalidArgument, "search budget must be at least 1");
    box.validate();
    Evaluator eval(reference, scenario, cfg.budget);
    if (cfg.method == SearchMethod::grid) {
        grid_search(box, eval, cfg.budget);
    } else {
        pattern_search(box, eval);
    }
    return std::move(eval).finish();
}

}  // namespace mfg
