#include "kinmarket/price.hpp"

#include <array>
#include <cmath>
#include <string>

#include "kinmarket/errors.hpp"
#include "kinmarket/rk4.hpp"

namespace kinmarket {

namespace {

// Bisection for an increasing f on [lo, hi] with f(lo) <= 0 < f(hi).
template <class F>
double bisect_increasing(F f, double lo, double hi, const RootFindConfig& cfg) {
    for (int it = 0; it < cfg.max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= cfg.rel_tol * hi) {
            break;
        }
        const double v = f(mid);
        if (v == 0.0) {
            return mid;
        }
        (v < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double g_transform(const DemandCurve& curve, double price) {
    const double mu = curve.fraction(price);
    return (1.0 - mu) * price / mu;
}

double future_price(const DemandCurve& curve, double price, double r, double dividend,
                    const RootFindConfig& cfg) {
    const double target = g_transform(curve, price) * (1.0 + r) + dividend;
    const auto residual = [&](double s) { return g_transform(curve, s) - target; };
    if (residual(price) >= 0.0) {
        // r = D = 0 (or rounding at the lower end): S' = S
        return price;
    }
    double hi = 2.0 * price;
    int doublings = 0;
    while (residual(hi) <= 0.0) {
        if (++doublings > cfg.max_iter || !std::isfinite(hi)) {
            throw BracketFailure("future_price: no upper bracket above S=" + std::to_string(price));
        }
        hi *= 2.0;
    }
    return bisect_increasing(residual, price, hi, cfg);
}

double equilibrium_price(const DemandCurve& curve, double mean_w, double n_pc, const RootFindConfig& cfg) {
    const auto excess = [&](double s) { return s * n_pc - curve.fraction(s) * mean_w; };
    // mu < 1, so demand at S = mean_w / n_pc is already below supply
    double hi = mean_w / n_pc;
    int doublings = 0;
    while (excess(hi) <= 0.0) {
        if (++doublings > cfg.max_iter || !std::isfinite(hi)) {
            throw BracketFailure("equilibrium_price: no upper bracket for mean wealth " +
                                 std::to_string(mean_w));
        }
        hi *= 2.0;
    }
    return bisect_increasing(excess, 0.0, hi, cfg);
}

double price_ode_rhs(const DemandCurve& curve, double price, double r, double dividend,
                     const RootFindConfig& cfg) {
    const double next = future_price(curve, price, r, dividend, cfg);
    const double mu = curve.fraction(price);
    const double prefactor = mu / (mu - curve.slope(price) * price);
    const double wealth_rate = (1.0 - mu) * r + mu * avg_return(price, next, dividend);
    return prefactor * wealth_rate * price;
}

std::vector<PricePoint> integrate_price_ode(const DemandCurve& curve, double S0, double r, double dividend,
                                            double t_end, double dt, const RootFindConfig& cfg) {
    if (!(S0 > 0.0)) throw ConfigError("integrate_price_ode: S0 must be > 0");
    if (!(dt > 0.0)) throw ConfigError("integrate_price_ode: dt must be > 0");
    if (!(t_end >= 0.0)) throw ConfigError("integrate_price_ode: t_end must be >= 0");

    const auto rhs = [&](double, const OdeState<1>& x) {
        return OdeState<1>{price_ode_rhs(curve, x[0], r, dividend, cfg)};
    };
    const auto traj = integrate_rk4<1>(rhs, OdeState<1>{S0}, 0.0, t_end, dt);

    std::vector<PricePoint> out;
    out.reserve(traj.size());
    for (const auto& [t, x] : traj) {
        out.push_back({t, x[0]});
    }
    return out;
}

GrowthEnvelope growth_envelope(const DemandCurve& curve, double S0, double w0, double r, double dividend,
                               double t) {
    const double rate = r + dividend / (S0 * (1.0 - curve.fraction(S0)));
    const double growth = std::exp(rate * t);
    return {w0 * growth, S0 * growth, rate};
}

double constant_mu_wealth(double fraction, double w0, double n_pc, double dividend, double r, double t) {
    const double growth = std::exp(r * t);
    return w0 * growth + (growth - 1.0) * n_pc * dividend / (1.0 - fraction);
}

} // namespace kinmarket
