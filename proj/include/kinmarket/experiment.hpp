#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kinmarket/engine.hpp"
#include "kinmarket/fokker_planck.hpp"
#include "kinmarket/market.hpp"

namespace kinmarket {

enum class Mode { Simulate, PriceOde, FokkerPlanck, Compare };

std::string to_string(Mode mode);
std::optional<Mode> mode_from_string(std::string_view name);

/// One experiment, as read from a config file or a named preset.
///
/// The return-noise width is stored relative to the price (`eta_rel_sd`);
/// `model_params` turns it into the absolute width the engine uses.
struct ExperimentConfig {
    std::string name = "custom";
    Mode mode = Mode::Simulate;

    double r = 0.0;
    double D = 0.0;
    double zeta = 0.0;
    double eta_rel_sd = 0.0;
    NoiseScaling eta_scaling = NoiseScaling::Fixed;
    double n_pc = 10.0;
    std::size_t N = 1000;
    std::size_t steps = 0;

    DemandCurve curve = DemandCurve::constant(0.5);
    double S0 = 50.0;
    double bonds0 = 500.0;

    std::vector<std::uint64_t> seeds{1};
    std::vector<std::size_t> snapshot_times;
    /// Step of the price ODE; the Fokker-Planck system uses r * dt in scaled time.
    double dt = 0.1;
    std::size_t histogram_bins = 60;
    std::size_t lorenz_grid = 100;
    unsigned workers = 1;

    std::filesystem::path out_dir = "out";

    /// Throws ConfigError.
    void validate() const;
    ModelParams model_params(std::uint64_t seed) const;
    double initial_mean_wealth() const { return n_pc * S0 + bonds0; }
};

/// Named configurations: test1, test2, test3. Throws UnknownPreset.
ExperimentConfig preset(std::string_view name);

/// Parses the `[section] key = value` format over `base`. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
/// Serializes every field; parse_config(to_config_text(c)) == c.
std::string to_config_text(const ExperimentConfig& config);

/// Seed-averaged market series (per-step mean across seeds).
std::vector<MarketState> average_states(const std::vector<SimulationRecord>& runs);

/// Runs one simulation per seed; `workers` > 1 runs seeds concurrently.
std::vector<SimulationRecord> simulate_seeds(const ExperimentConfig& config);

struct SnapshotMetrics {
    std::size_t t;
    double tau;
    double gini;
    double gini_se;
    double ks;    ///< NaN when the limit lognormal is degenerate
    double ks_se;
    double fitted_a;
    double fitted_b;
    double fitted_b_se;
    double fp_a;
    double fp_b;
};

/// Gini, lognormal fit and KS distance of the self-similar rescaled sample
/// at time t, averaged across runs.
SnapshotMetrics snapshot_metrics(const ExperimentConfig& config, const std::vector<SimulationRecord>& runs,
                                 std::size_t t);

/// Writes the output files for config.mode into config.out_dir. On failure
/// every file written so far is removed and the exception is rethrown.
std::vector<std::filesystem::path> run(const ExperimentConfig& config);

} // namespace kinmarket
