#include "kinmarket/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "kinmarket/errors.hpp"
#include "kinmarket/random.hpp"

namespace kinmarket {

namespace {

struct Moments {
    double mean;
    double second;
};

// Summed in agent order so the result is independent of the worker count.
Moments ensemble_moments(const std::vector<double>& w) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const double x : w) {
        sum += x;
        sum_sq += x * x;
    }
    const auto n = static_cast<double>(w.size());
    return {sum / n, sum_sq / n};
}

template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body body) {
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned k = 0; k < workers; ++k) {
        const std::size_t begin = k * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
}

} // namespace

std::pair<AgentEnsemble, MarketState> init_ensemble(const ModelParams& params, const DemandCurve& curve,
                                                    double S0, double bonds0, const RootFindConfig& root) {
    params.validate();
    if (!(S0 > 0.0)) throw ConfigError("initial price must be > 0");
    if (!(bonds0 >= 0.0)) throw ConfigError("initial bond holding must be >= 0");

    const double w0 = params.n_pc * S0 + bonds0;
    const double clearing = equilibrium_price(curve, w0, params.n_pc, root);
    if (std::abs(clearing - S0) > 1e-8 * S0) {
        throw InitError("initial price " + std::to_string(S0) + " does not clear the market (clearing price " +
                        std::to_string(clearing) + ")");
    }

    AgentEnsemble ensemble{std::vector<double>(params.N, w0)};
    MarketState state;
    state.t = 0;
    state.S = S0;
    state.mean_w = w0;
    state.second_w = w0 * w0;
    state.mean_gamma = curve.fraction(S0);
    return {std::move(ensemble), state};
}

MarketState market_step(AgentEnsemble& ensemble, const MarketState& state, const ModelParams& params,
                        const DemandCurve& curve, const EngineOptions& options) {
    const double S = state.S;
    const double next = future_price(curve, S, params.r, params.D, options.root);
    const double sigma = eta_std(params, S);
    const double bond_factor = 1.0 + params.r;

    auto& w = ensemble.wealth;
    std::vector<double> gamma(w.size());
    parallel_for(w.size(), options.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RandomStream rng(params.seed, state.t, i);
            const double g = sample_gamma(curve, S, params.zeta, rng);
            const double eta = sample_eta(next, params.D, sigma, rng);
            // w' = (1 - g) w (1 + r) + g w (1 + x); both factors are >= 0
            const double stock_factor = (next + params.D + eta) / S;
            w[i] *= (1.0 - g) * bond_factor + g * stock_factor;
            gamma[i] = g;
        }
    });

    const Moments m = ensemble_moments(w);
    if (!std::isfinite(m.mean) || !std::isfinite(m.second)) {
        throw NumericalError("market_step: wealth overflow at step " + std::to_string(state.t + 1));
    }
    double gamma_sum = 0.0;
    for (const double g : gamma) {
        gamma_sum += g;
    }

    MarketState out;
    out.t = state.t + 1;
    out.S = equilibrium_price(curve, m.mean, params.n_pc, options.root);
    out.mean_w = m.mean;
    out.second_w = m.second;
    out.mean_gamma = gamma_sum / static_cast<double>(gamma.size());
    return out;
}

SimulationRecord run_simulation(const ModelParams& params, const DemandCurve& curve, double S0, double bonds0,
                                const EngineOptions& options) {
    auto [ensemble, state] = init_ensemble(params, curve, S0, bonds0, options.root);

    SimulationRecord record;
    record.params = params;
    record.states.reserve(params.steps + 1);
    record.states.push_back(state);

    const auto wants_snapshot = [&](std::size_t t) {
        return std::find(options.snapshot_times.begin(), options.snapshot_times.end(), t) !=
               options.snapshot_times.end();
    };
    if (wants_snapshot(0)) {
        record.snapshots.emplace(0, ensemble);
    }
    for (std::size_t k = 0; k < params.steps; ++k) {
        state = market_step(ensemble, state, params, curve, options);
        record.states.push_back(state);
        if (wants_snapshot(state.t)) {
            record.snapshots.emplace(state.t, ensemble);
        }
    }
    record.final = std::move(ensemble);
    return record;
}

} // namespace kinmarket
