#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "mfg/errors.hpp"

namespace mfg {

/// Uniform partition of [0, T] into `cells` intervals. Node k sits at k * T / cells,
/// and the last node is T exactly.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t cells);

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t cells() const noexcept { return cells_; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_ + 1; }
    [[nodiscard]] double step() const noexcept { return horizon_ / static_cast<double>(cells_); }
    [[nodiscard]] double node(std::size_t k) const noexcept;

    /// Cell index containing t (clamped to [0, cells-1]) and the local weight in [0, 1].
    [[nodiscard]] std::pair<std::size_t, double> locate(double t) const noexcept;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double horizon_;
    std::size_t cells_;
};

/// Values sampled on a TimeGrid, evaluated between nodes by linear interpolation.
class SampledFunction {
public:
    SampledFunction(TimeGrid grid, std::vector<double> values);
    explicit SampledFunction(TimeGrid grid, double fill = 0.0);

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    [[nodiscard]] double at(double t) const noexcept;
    [[nodiscard]] double max() const noexcept;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// Running integral of the linear interpolant of a SampledFunction.
/// integral(a, b) is exact for piecewise-linear integrands.
class CumulativeIntegral {
public:
    explicit CumulativeIntegral(const SampledFunction& f);

    [[nodiscard]] double from_zero(double t) const noexcept;
    [[nodiscard]] double at_node(std::size_t k) const noexcept { return cumulative_[k]; }
    [[nodiscard]] double integral(double a, double b) const noexcept { return from_zero(b) - from_zero(a); }

private:
    SampledFunction f_;
    std::vector<double> cumulative_;
};

/// Composite trapezoid over [a, b]; endpoints need not be nodes.
[[nodiscard]] double integrate_trapezoid(const SampledFunction& f, double a, double b);

// Throughput families. All are C1 with analytic derivatives.
struct ConstantThroughput {
    double level = 0.0;
};

/// Raised cosine: peak * (1 - cos(2 pi (t - start) / (end - start))) / 2 on [start, end], zero outside.
struct BumpThroughput {
    double peak = 0.0;
    double start = 0.0;
    double end = 1.0;
};

/// Plateau at `level` with smoothstep ramps of width `ramp` at t = 0 and t = T.
struct SmoothTrapezoidThroughput {
    double level = 0.0;
    double ramp = 0.0;
};

using ThroughputSpec = std::variant<ConstantThroughput, BumpThroughput, SmoothTrapezoidThroughput>;

/// (lambda(t), lambda'(t)) for a family on horizon T.
[[nodiscard]] std::pair<double, double> evaluate_throughput(const ThroughputSpec& spec, double t, double horizon);

struct Throughput {
    SampledFunction rate;
    SampledFunction derivative;
};

/// Samples lambda and its analytic derivative; rejects lambda < 0 or lambda + lambda' < 0 at any node.
[[nodiscard]] Throughput sample_throughput(const ThroughputSpec& spec, const TimeGrid& grid);

using State = std::vector<double>;

/// One classical Runge-Kutta step of size h from (t, y).
template <typename Rhs>
[[nodiscard]] State rk4_step(Rhs&& rhs, double t, const State& y, double h) {
    const std::size_t n = y.size();
    State stage(n);
    const State k1 = rhs(t, y);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k1[i];
    const State k2 = rhs(t + 0.5 * h, stage);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k2[i];
    const State k3 = rhs(t + 0.5 * h, stage);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + h * k3[i];
    const State k4 = rhs(t + h, stage);
    State next(n);
    for (std::size_t i = 0; i < n; ++i) {
        next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return next;
}

void require_finite(const State& y, double t);

/// RK4 trajectory over every node of `grid`; entry 0 is y0.
template <typename Rhs>
[[nodiscard]] std::vector<State> integrate_ode(Rhs&& rhs, const State& y0, const TimeGrid& grid) {
    std::vector<State> out;
    out.reserve(grid.size());
    out.push_back(y0);
    require_finite(y0, 0.0);
    const double h = grid.step();
    for (std::size_t k = 0; k < grid.cells(); ++k) {
        out.push_back(rk4_step(rhs, grid.node(k), out.back(), h));
        require_finite(out.back(), grid.node(k + 1));
    }
    return out;
}

/// Golden-section minimization on the open interval (lo, hi); endpoints are never evaluated.
template <typename F>
[[nodiscard]] std::pair<double, double> golden_section_minimize(F&& f, double lo, double hi, double x_tol,
                                                                int max_iter = 200) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace mfg
