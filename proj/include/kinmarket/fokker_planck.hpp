#pragma once

#include <vector>

#include "kinmarket/market.hpp"
#include "kinmarket/price.hpp"

namespace kinmarket {

/// Parameters of the small-rate limit (r -> 0 with D/r and sigma^2/r fixed).
struct FpParams {
    double lambda = 0.0; ///< D / r
    /// sigma^2 / r. With NoiseScaling::PriceRelative, sigma is relative to the
    /// price and nu carries no price dimension.
    double nu = 0.0;
    double zeta = 0.0;
    DemandCurve curve = DemandCurve::constant(0.5);
    double n_pc = 1.0;
    NoiseScaling eta_scaling = NoiseScaling::Fixed;

    /// Limit parameters matching a discrete model with rate r > 0.
    static FpParams from_model(const ModelParams& params, const DemandCurve& curve);
};

struct FpCoefficients {
    double A;     ///< drift rate
    double B;     ///< diffusion rate
    double kappa; ///< in (0, 1]
};

/// Log-space location a and log-variance b of the self-similar lognormal.
struct LognormalParams {
    double a;
    double b;
};

/// mu (1 - mu) / (mu (1 - mu) - S mu'); equals 1 iff the curve is flat at S.
double kappa(const DemandCurve& curve, double price);

FpCoefficients fp_coeffs(const FpParams& fp, double price);

struct FpMomentPoint {
    double tau;
    double S;
    double mean_w;
    double second_w;
    double A;
    double B;
};

/// RK4 solution of the coupled (S, mean, second moment) system in scaled time.
/// The initial price is the clearing price of w0.
std::vector<FpMomentPoint> integrate_fp_moments(const FpParams& fp, double w0, double e0, double tau_end,
                                                double dtau, const RootFindConfig& root = {});

/// Self-similar lognormal density; 0 for w <= 0.
double lognormal_pdf(const LognormalParams& p, double w);
double lognormal_cdf(const LognormalParams& p, double w);

/// a = log(mean), b = log(second / mean^2). Throws DegenerateDistribution if b == 0.
LognormalParams lognormal_from_moments(double mean_w, double second_w);

/// Multiplies every sample by mean_w_0 / mean_w_tau.
std::vector<double> self_similar_rescale(const std::vector<double>& wealth, double mean_w_0, double mean_w_tau);

} // namespace kinmarket
