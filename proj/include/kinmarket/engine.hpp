#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "kinmarket/market.hpp"
#include "kinmarket/price.hpp"

namespace kinmarket {

struct EngineOptions {
    /// Threads used for the per-agent update. Results do not depend on it.
    unsigned workers = 1;
    RootFindConfig root;
    /// Steps at which a copy of the ensemble is kept in the record.
    std::vector<std::size_t> snapshot_times;
};

struct SimulationRecord {
    ModelParams params;
    /// One entry per step, initial state included (size steps + 1).
    std::vector<MarketState> states;
    AgentEnsemble final;
    std::map<std::size_t, AgentEnsemble> snapshots;
};

/// Uniform initial wealth n_pc * S0 + bonds0. Throws InitError unless S0 is
/// the clearing price of that wealth under `curve`.
std::pair<AgentEnsemble, MarketState> init_ensemble(const ModelParams& params, const DemandCurve& curve,
                                                    double S0, double bonds0, const RootFindConfig& root = {});

/// Advances the market one step. Noise for agent i at step state.t is drawn
/// from RandomStream(params.seed, state.t, i).
MarketState market_step(AgentEnsemble& ensemble, const MarketState& state, const ModelParams& params,
                        const DemandCurve& curve, const EngineOptions& options = {});

SimulationRecord run_simulation(const ModelParams& params, const DemandCurve& curve, double S0, double bonds0,
                                const EngineOptions& options = {});

} // namespace kinmarket
