#pragma once

#include <vector>

#include "kinmarket/market.hpp"

namespace kinmarket {

/// Controls for the bracketed bisection searches.
struct RootFindConfig {
    /// Stop once the bracket width falls below rel_tol * (price scale).
    double rel_tol = 1e-14;
    /// Cap on bracket doublings, and separately on bisection iterations.
    int max_iter = 200;
};

/// g(S) = (1 - mu(S)) S / mu(S); strictly increasing in S.
double g_transform(const DemandCurve& curve, double price);

/// Unique S' with g(S') = g(S)(1 + r) + D. Throws BracketFailure.
double future_price(const DemandCurve& curve, double price, double r, double dividend,
                    const RootFindConfig& cfg = {});

/// Unique S > 0 with S * n_pc = mu(S) * mean_w. Throws BracketFailure.
double equilibrium_price(const DemandCurve& curve, double mean_w, double n_pc,
                         const RootFindConfig& cfg = {});

/// Expected stock return (S' - S + D) / S.
inline double avg_return(double price, double next_price, double dividend) {
    return (next_price - price + dividend) / price;
}

/// dS/dt of the deterministic price equation.
double price_ode_rhs(const DemandCurve& curve, double price, double r, double dividend,
                     const RootFindConfig& cfg = {});

struct PricePoint {
    double t;
    double S;
};

/// RK4 trajectory of price_ode_rhs from S0 over [0, t_end].
std::vector<PricePoint> integrate_price_ode(const DemandCurve& curve, double S0, double r, double dividend,
                                            double t_end, double dt, const RootFindConfig& cfg = {});

struct GrowthEnvelope {
    double wealth;
    double price;
    double rate; ///< M = r + D / (S0 (1 - mu(S0)))
};

/// Exponential upper bounds on mean wealth and price at time t.
GrowthEnvelope growth_envelope(const DemandCurve& curve, double S0, double w0, double r, double dividend,
                               double t);

/// Mean wealth under a constant invested fraction, continuous time.
double constant_mu_wealth(double fraction, double w0, double n_pc, double dividend, double r, double t);

} // namespace kinmarket
