#pragma once

// Brute-force reference for the value functions. Shares no code with value_field: it
// recomputes congestion integrals directly from the masses and enumerates arrival times
// on a lattice that subdivides every grid cell.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace mfg::testing {

struct OracleProblem {
    std::array<double, 5> lengths{};
    double alpha = 1.0;
    double horizon = 2.0;
    std::size_t cells = 40;
    std::array<double, 5> slope{};
    std::array<double, 5> offset{};
    std::vector<std::array<double, 5>> rho;  // cells + 1 rows
};

struct OracleValues {
    std::array<std::vector<double>, 5> v;  // e1..e5 at grid nodes
    std::vector<double> origin;
};

class ValueOracle {
public:
    ValueOracle(const OracleProblem& p, std::size_t subdivisions) : p_(p), m_(subdivisions) {
        h_ = p.horizon / static_cast<double>(p.cells);
    }

    OracleValues solve() const {
        const std::size_t n = p_.cells;
        OracleValues out;
        for (auto& col : out.v) col.assign(n + 1, 0.0);
        const auto& l = p_.lengths;
        const std::array<double, 5> penalty{std::min(l[0] + l[3], l[0] + l[2] + l[4]), l[1] + l[4], l[2] + l[4],
                                            l[3], l[4]};
        // Terminal links: closed form.
        for (std::size_t e : {3u, 4u}) {
            for (std::size_t k = 0; k <= n; ++k) {
                const double t = time(k);
                const double cong = congestion(e, t, p_.horizon);
                double best = p_.alpha * penalty[e] + cong;
                if (k < n) best = std::min(best, 0.5 * l[e] * l[e] / (p_.horizon - t) + cong);
                out.v[e][k] = best;
            }
        }
        auto enumerate = [&](std::size_t e, auto next) {
            for (std::size_t k = 0; k <= n; ++k) {
                const double t = time(k);
                double best = p_.alpha * penalty[e] + congestion(e, t, p_.horizon);
                for (std::size_t j = k; j < n; ++j) {
                    for (std::size_t i = 1; i <= m_; ++i) {
                        const double tau = i == m_ ? time(j + 1) : time(j) + h_ * double(i) / double(m_);
                        const double c = 0.5 * l[e] * l[e] / (tau - t) + congestion(e, t, tau) + next(tau);
                        best = std::min(best, c);
                    }
                }
                out.v[e][k] = best;
            }
        };
        enumerate(2, [&](double tau) { return interp(out.v[4], tau); });
        enumerate(0, [&](double tau) { return std::min(interp(out.v[2], tau), interp(out.v[3], tau)); });
        enumerate(1, [&](double tau) { return interp(out.v[4], tau); });
        out.origin.resize(n + 1);
        for (std::size_t k = 0; k <= n; ++k) out.origin[k] = std::min(out.v[0][k], out.v[1][k]);
        return out;
    }

private:
    double time(std::size_t k) const { return k == p_.cells ? p_.horizon : double(k) * p_.horizon / double(p_.cells); }

    double phi(std::size_t e, std::size_t k) const { return p_.slope[e] * p_.rho[k][e] + p_.offset[e]; }

    double interp(const std::vector<double>& v, double t) const {
        if (t >= p_.horizon) return v.back();
        const double pos = t / h_;
        std::size_t k = static_cast<std::size_t>(std::floor(pos));
        if (k >= p_.cells) k = p_.cells - 1;
        const double w = pos - double(k);
        return (1.0 - w) * v[k] + w * v[k + 1];
    }

    double phi_at(std::size_t e, double t) const {
        const double pos = std::clamp(t / h_, 0.0, double(p_.cells));
        std::size_t k = static_cast<std::size_t>(std::floor(pos));
        if (k >= p_.cells) k = p_.cells - 1;
        const double w = pos - double(k);
        return (1.0 - w) * phi(e, k) + w * phi(e, k + 1);
    }

    /// Integral of the piecewise-linear congestion cost over [a, b], cell by cell.
    double congestion(std::size_t e, double a, double b) const {
        if (b <= a) return 0.0;
        double total = 0.0;
        for (std::size_t k = 0; k < p_.cells; ++k) {
            const double lo = std::max(a, time(k));
            const double hi = std::min(b, time(k + 1));
            if (hi <= lo) continue;
            total += 0.5 * (hi - lo) * (phi_at(e, lo) + phi_at(e, hi));
        }
        return total;
    }

    OracleProblem p_;
    std::size_t m_;
    double h_;
};

}  // namespace mfg::testing
