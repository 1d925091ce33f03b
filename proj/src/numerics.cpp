#include "mfg/numerics.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace mfg {

TimeGrid::TimeGrid(double horizon, std::size_t cells) : horizon_(horizon), cells_(cells) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw Error(ErrorCode::InvalidArgument, "time grid horizon must be positive and finite");
    }
    if (cells < 1) {
        throw Error(ErrorCode::InvalidArgument, "time grid needs at least one cell");
    }
}

double TimeGrid::node(std::size_t k) const noexcept {
    if (k >= cells_) return horizon_;
    return static_cast<double>(k) * horizon_ / static_cast<double>(cells_);
}

std::pair<std::size_t, double> TimeGrid::locate(double t) const noexcept {
    if (t <= 0.0) return {0, 0.0};
    if (t >= horizon_) return {cells_ - 1, 1.0};
    const double pos = t / step();
    const double nearest = std::round(pos);
    // Snap values that are nodes up to rounding so node lookups stay exact.
    if (std::abs(pos - nearest) < 1e-12 * std::max(1.0, nearest)) {
        const auto k = static_cast<std::size_t>(nearest);
        if (k >= cells_) return {cells_ - 1, 1.0};
        return {k, 0.0};
    }
    const auto k = std::min(static_cast<std::size_t>(pos), cells_ - 1);
    return {k, std::clamp(pos - static_cast<double>(k), 0.0, 1.0)};
}

SampledFunction::SampledFunction(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw Error(ErrorCode::InvalidArgument, "sampled function length must equal grid node count");
    }
}

SampledFunction::SampledFunction(TimeGrid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

double SampledFunction::at(double t) const noexcept {
    const auto [k, w] = grid_.locate(t);
    if (w == 0.0) return values_[k];
    if (w == 1.0) return values_[k + 1];
    return values_[k] + w * (values_[k + 1] - values_[k]);
}

double SampledFunction::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

CumulativeIntegral::CumulativeIntegral(const SampledFunction& f) : f_(f), cumulative_(f.grid().size(), 0.0) {
    const double h = f.grid().step();
    for (std::size_t k = 0; k + 1 < cumulative_.size(); ++k) {
        cumulative_[k + 1] = cumulative_[k] + 0.5 * h * (f[k] + f[k + 1]);
    }
}

double CumulativeIntegral::from_zero(double t) const noexcept {
    const auto [k, w] = f_.grid().locate(t);
    if (w == 0.0) return cumulative_[k];
    if (w == 1.0) return cumulative_[k + 1];
    const double h = f_.grid().step();
    const double partial_end = f_[k] + w * (f_[k + 1] - f_[k]);
    return cumulative_[k] + 0.5 * w * h * (f_[k] + partial_end);
}

double integrate_trapezoid(const SampledFunction& f, double a, double b) {
    const double horizon = f.grid().horizon();
    const double slack = 1e-12 * horizon;
    if (a < -slack || b > horizon + slack || a > b + slack) {
        std::ostringstream msg;
        msg << "integration interval [" << a << ", " << b << "] not within [0, " << horizon << "]";
        throw Error(ErrorCode::OutOfRange, msg.str());
    }
    if (a >= b) return 0.0;
    return CumulativeIntegral(f).integral(std::max(a, 0.0), std::min(b, horizon));
}

namespace {

double smoothstep(double x) { return x * x * (3.0 - 2.0 * x); }
double smoothstep_slope(double x) { return 6.0 * x * (1.0 - x); }

}  // namespace

std::pair<double, double> evaluate_throughput(const ThroughputSpec& spec, double t, double horizon) {
    return std::visit(
        [&](const auto& family) -> std::pair<double, double> {
            using Family = std::decay_t<decltype(family)>;
            if constexpr (std::is_same_v<Family, ConstantThroughput>) {
                return {family.level, 0.0};
            } else if constexpr (std::is_same_v<Family, BumpThroughput>) {
                if (t < family.start || t > family.end) return {0.0, 0.0};
                const double width = family.end - family.start;
                const double omega = 2.0 * std::numbers::pi / width;
                const double phase = omega * (t - family.start);
                return {0.5 * family.peak * (1.0 - std::cos(phase)), 0.5 * family.peak * omega * std::sin(phase)};
            } else {
                const double r = family.ramp;
                if (t < r) {
                    const double x = t / r;
                    return {family.level * smoothstep(x), family.level * smoothstep_slope(x) / r};
                }
                if (t > horizon - r) {
                    const double x = (horizon - t) / r;
                    return {family.level * smoothstep(x), -family.level * smoothstep_slope(x) / r};
                }
                return {family.level, 0.0};
            }
        },
        spec);
}

Throughput sample_throughput(const ThroughputSpec& spec, const TimeGrid& grid) {
    if (const auto* bump = std::get_if<BumpThroughput>(&spec); bump && !(bump->end > bump->start)) {
        throw Error(ErrorCode::InvalidArgument, "bump throughput needs end > start");
    }
    if (const auto* trap = std::get_if<SmoothTrapezoidThroughput>(&spec);
        trap && !(trap->ramp > 0.0 && 2.0 * trap->ramp <= grid.horizon())) {
        throw Error(ErrorCode::InvalidArgument, "trapezoid_smooth ramp must lie in (0, T/2]");
    }

    Throughput out{SampledFunction(grid), SampledFunction(grid)};
    double scale = 1.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto [value, slope] = evaluate_throughput(spec, grid.node(k), grid.horizon());
        out.rate[k] = value;
        out.derivative[k] = slope;
        scale = std::max(scale, std::abs(value));
    }
    // Roundoff at the support boundary of a family must not count as a violation.
    const double slack = 1e-12 * scale;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (out.rate[k] < -slack) {
            std::ostringstream msg;
            msg << "lambda(" << grid.node(k) << ") = " << out.rate[k] << " < 0";
            throw Error(ErrorCode::NegativeThroughput, msg.str());
        }
        if (out.rate[k] + out.derivative[k] < -slack) {
            std::ostringstream msg;
            msg << "lambda + lambda' = " << out.rate[k] + out.derivative[k] << " < 0 at t = " << grid.node(k)
                << " (rule: lambda + lambda' >= 0)";
            throw Error(ErrorCode::RateViolation, msg.str());
        }
        out.rate[k] = std::max(out.rate[k], 0.0);
    }
    return out;
}

void require_finite(const State& y, double t) {
    for (double v : y) {
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "non-finite ODE state at t = " << t;
            throw Error(ErrorCode::NonFiniteState, msg.str());
        }
    }
}

}  // namespace mfg
