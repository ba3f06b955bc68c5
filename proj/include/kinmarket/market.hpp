#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace kinmarket {

/// How the standard deviation of the return noise follows the market.
enum class NoiseScaling {
    /// `sigma` is an absolute std-dev in currency, fixed for the whole run.
    Fixed,
    /// `sigma` is a std-dev relative to the current price; the absolute
    /// std-dev at price S is sigma * S.
    PriceRelative,
};

std::string to_string(NoiseScaling scaling);
NoiseScaling noise_scaling_from_string(const std::string& name);

struct ModelParams {
    double r = 0.0;      ///< bond interest rate per step
    double D = 0.0;      ///< dividend per share per step
    double zeta = 0.0;   ///< std-dev of the portfolio-fraction noise
    double sigma = 0.0;  ///< std-dev of the return noise, see NoiseScaling
    double n_pc = 1.0;   ///< shares per agent
    std::size_t N = 1;   ///< number of agents
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    NoiseScaling eta_scaling = NoiseScaling::Fixed;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

/// Absolute std-dev of the return noise when the current price is `price`.
inline double eta_std(const ModelParams& params, double price) {
    return params.eta_scaling == NoiseScaling::Fixed ? params.sigma : params.sigma * price;
}

/// Optimal invested fraction as a non-increasing function of the price.
class DemandCurve {
public:
    struct Constant {
        double fraction;
    };
    /// fraction(S) = floor + (1 - floor) * exp(-rate * S)
    struct ExponentialDecay {
        double floor;
        double rate;
    };

    static DemandCurve constant(double fraction);
    static DemandCurve exponential_decay(double floor, double rate);

    /// Invested fraction at price S, in (0, 1) for S > 0. The exponential
    /// family reaches 1 at S = 0.
    double fraction(double price) const;
    /// d fraction / dS, always <= 0.
    double slope(double price) const;

    bool is_constant() const { return std::holds_alternative<Constant>(shape_); }
    const std::variant<Constant, ExponentialDecay>& shape() const { return shape_; }

private:
    explicit DemandCurve(std::variant<Constant, ExponentialDecay> shape) : shape_(shape) {}

    std::variant<Constant, ExponentialDecay> shape_;
};

struct AgentEnsemble {
    std::vector<double> wealth;

    std::size_t size() const { return wealth.size(); }
};

struct MarketState {
    std::size_t t = 0;
    double S = 0.0;
    double mean_w = 0.0;
    double second_w = 0.0;
    double mean_gamma = 0.0;
};

namespace detail {

// Zero-mean Gaussian rejection-sampled into [-half_width, half_width].
template <class Rng>
double symmetric_truncated_normal(double stddev, double half_width, Rng& rng) {
    if (stddev <= 0.0 || half_width <= 0.0) {
        return 0.0;
    }
    std::normal_distribution<double> normal(0.0, stddev);
    for (;;) {
        const double x = normal(rng);
        if (std::abs(x) <= half_width) {
            return x;
        }
    }
}

} // namespace detail

/// Invested fraction mu(S) + xi, xi truncated to keep the result in [0, 1].
template <class Rng>
double sample_gamma(const DemandCurve& curve, double price, double zeta, Rng& rng) {
    const double mu = curve.fraction(price);
    if (zeta <= 0.0) {
        return mu;
    }
    const double half_width = std::min(mu, 1.0 - mu);
    return mu + detail::symmetric_truncated_normal(zeta, half_width, rng);
}

/// Return noise with support [-(S' + D), S' + D], which keeps every wealth nonnegative.
template <class Rng>
double sample_eta(double next_price, double dividend, double sigma, Rng& rng) {
    if (sigma <= 0.0) {
        return 0.0;
    }
    return detail::symmetric_truncated_normal(sigma, next_price + dividend, rng);
}

} // namespace kinmarket
