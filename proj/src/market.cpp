#include "kinmarket/market.hpp"

#include "kinmarket/errors.hpp"

namespace kinmarket {

std::string to_string(NoiseScaling scaling) {
    return scaling == NoiseScaling::Fixed ? "initial" : "current";
}

NoiseScaling noise_scaling_from_string(const std::string& name) {
    if (name == "initial") {
        return NoiseScaling::Fixed;
    }
    if (name == "current") {
        return NoiseScaling::PriceRelative;
    }
    throw ConfigError("unknown eta scaling '" + name + "' (expected initial or current)");
}

void ModelParams::validate() const {
    if (!(r >= 0.0)) throw ConfigError("r must be >= 0");
    if (!(D >= 0.0)) throw ConfigError("D must be >= 0");
    if (!(zeta >= 0.0)) throw ConfigError("zeta must be >= 0");
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
    if (!(n_pc > 0.0)) throw ConfigError("n_pc must be > 0");
    if (N < 1) throw ConfigError("N must be >= 1");
}

DemandCurve DemandCurve::constant(double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ConfigError("constant demand fraction must lie in (0,1)");
    }
    return DemandCurve(Constant{fraction});
}

DemandCurve DemandCurve::exponential_decay(double floor, double rate) {
    if (!(floor > 0.0 && floor < 1.0)) {
        throw ConfigError("demand floor must lie in (0,1)");
    }
    if (!(rate > 0.0)) {
        throw ConfigError("demand decay rate must be > 0");
    }
    return DemandCurve(ExponentialDecay{floor, rate});
}

double DemandCurve::fraction(double price) const {
    if (const auto* c = std::get_if<Constant>(&shape_)) {
        return c->fraction;
    }
    const auto& e = std::get<ExponentialDecay>(shape_);
    return e.floor + (1.0 - e.floor) * std::exp(-e.rate * price);
}

double DemandCurve::slope(double price) const {
    if (std::holds_alternative<Constant>(shape_)) {
        return 0.0;
    }
    const auto& e = std::get<ExponentialDecay>(shape_);
    return -e.rate * (1.0 - e.floor) * std::exp(-e.rate * price);
}

} // namespace kinmarket
