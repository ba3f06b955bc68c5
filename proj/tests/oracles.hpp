#pragma once

// Reference computations used only by the tests. They never call into the
// library routines they are used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol || std::abs(delta) <= 1e-15 * std::abs(whole)) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                               int max_depth = 50) {
    // split up front so narrow peaks are not missed by the first coarse estimate
    const int pieces = 64;
    double total = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double lo = a + (b - a) * k / pieces;
        const double hi = a + (b - a) * (k + 1) / pieces;
        const double fa = f(lo);
        const double fb = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / pieces, max_depth);
    }
    return total;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Gini of a lognormal with log-std s, as 1 - 2 * integral of the Lorenz curve.
/// Works in chi = log w: F has density phi(chi), and the wealth share of the
/// population below chi is Phi(chi - s) for a unit-location lognormal.
inline double lognormal_gini_by_lorenz(double s) {
    const auto integrand = [s](double chi) {
        const double density = std::exp(-0.5 * chi * chi) / std::sqrt(2.0 * std::numbers::pi);
        return density * normal_cdf(chi - s);
    };
    const double area = adaptive_simpson(integrand, -12.0, 12.0, 1e-13);
    return 1.0 - 2.0 * area;
}

/// Root of an increasing f on [lo, hi] by dense scan then linear interpolation.
inline double scan_root(const std::function<double(double)>& f, double lo, double hi, std::size_t points) {
    double prev_x = lo;
    double prev_f = f(lo);
    for (std::size_t k = 1; k <= points; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points);
        const double fx = f(x);
        if (prev_f <= 0.0 && fx > 0.0) {
            return prev_x - prev_f * (x - prev_x) / (fx - prev_f);
        }
        prev_x = x;
        prev_f = fx;
    }
    return std::nan("");
}

struct MeanSe {
    double mean;
    double se;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    const auto n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (const double x : xs) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    return {mean, xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

} // namespace oracle
