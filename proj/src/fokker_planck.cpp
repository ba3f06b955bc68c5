#include "kinmarket/fokker_planck.hpp"

#include <cmath>
#include <numbers>

#include "kinmarket/errors.hpp"
#include "kinmarket/rk4.hpp"

namespace kinmarket {

FpParams FpParams::from_model(const ModelParams& params, const DemandCurve& curve) {
    if (!(params.r > 0.0)) {
        throw ConfigError("the Fokker-Planck limit needs r > 0");
    }
    FpParams fp;
    fp.lambda = params.D / params.r;
    fp.nu = params.sigma * params.sigma / params.r;
    fp.zeta = params.zeta;
    fp.curve = curve;
    fp.n_pc = params.n_pc;
    fp.eta_scaling = params.eta_scaling;
    return fp;
}

double kappa(const DemandCurve& curve, double price) {
    const double mu = curve.fraction(price);
    const double spread = mu * (1.0 - mu);
    return spread / (spread - price * curve.slope(price));
}

FpCoefficients fp_coeffs(const FpParams& fp, double price) {
    const double mu = fp.curve.fraction(price);
    const double k = kappa(fp.curve, price);
    const double A = 1.0 + mu * ((k - 1.0) + (mu * (k - 1.0) + 1.0) / (1.0 - mu) * fp.lambda / price);
    const double noise = (mu * mu + fp.zeta * fp.zeta) * fp.nu;
    const double B = fp.eta_scaling == NoiseScaling::Fixed ? noise / (price * price) : noise;
    return {A, B, k};
}

std::vector<FpMomentPoint> integrate_fp_moments(const FpParams& fp, double w0, double e0, double tau_end,
                                                double dtau, const RootFindConfig& root) {
    if (!(w0 > 0.0)) throw ConfigError("integrate_fp_moments: w0 must be > 0");
    if (!(e0 >= w0 * w0 * (1.0 - 1e-12))) throw ConfigError("integrate_fp_moments: e0 must be >= w0^2");
    if (!(dtau > 0.0)) throw ConfigError("integrate_fp_moments: dtau must be > 0");

    const double S0 = equilibrium_price(fp.curve, w0, fp.n_pc, root);

    // state = (S, mean, second); dS/dtau follows from differentiating the
    // clearing relation along d mean / dtau = A mean
    const auto rhs = [&](double, const OdeState<3>& x) {
        const double S = x[0];
        const auto c = fp_coeffs(fp, S);
        const double mu = fp.curve.fraction(S);
        const double price_rate = mu / (mu - fp.curve.slope(S) * S) * c.A * S;
        return OdeState<3>{price_rate, c.A * x[1], (2.0 * c.A + c.B) * x[2]};
    };
    const auto traj = integrate_rk4<3>(rhs, OdeState<3>{S0, w0, e0}, 0.0, tau_end, dtau);

    std::vector<FpMomentPoint> out;
    out.reserve(traj.size());
    for (const auto& [tau, x] : traj) {
        const auto c = fp_coeffs(fp, x[0]);
        out.push_back({tau, x[0], x[1], x[2], c.A, c.B});
    }
    return out;
}

double lognormal_pdf(const LognormalParams& p, double w) {
    if (w <= 0.0) {
        return 0.0;
    }
    const double z = std::log(w) + 0.5 * p.b - p.a;
    return std::exp(-z * z / (2.0 * p.b)) / (w * std::sqrt(2.0 * std::numbers::pi * p.b));
}

double lognormal_cdf(const LognormalParams& p, double w) {
    if (w <= 0.0) {
        return 0.0;
    }
    const double z = (std::log(w) + 0.5 * p.b - p.a) / std::sqrt(p.b);
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

LognormalParams lognormal_from_moments(double mean_w, double second_w) {
    if (!(mean_w > 0.0)) throw ConfigError("lognormal_from_moments: mean must be > 0");
    if (!(second_w >= mean_w * mean_w)) {
        throw ConfigError("lognormal_from_moments: second moment below squared mean");
    }
    const double b = std::log(second_w / (mean_w * mean_w));
    if (!(b > 0.0)) {
        throw DegenerateDistribution("lognormal_from_moments: zero variance (point mass)");
    }
    return {std::log(mean_w), b};
}

std::vector<double> self_similar_rescale(const std::vector<double>& wealth, double mean_w_0, double mean_w_tau) {
    if (!(mean_w_tau > 0.0)) throw ConfigError("self_similar_rescale: current mean must be > 0");
    const double factor = mean_w_0 / mean_w_tau;
    std::vector<double> out(wealth.size());
    for (std::size_t i = 0; i < wealth.size(); ++i) {
        out[i] = factor * wealth[i];
    }
    return out;
}

} // namespace kinmarket
