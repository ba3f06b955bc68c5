// kinmarket: run market simulations, price/Fokker-Planck ODEs and comparisons.
//
//   kinmarket <mode|preset-name> [--config <path>] --out <dir>
//             [--seeds a,b,c] [--steps N] [--dt x] [--mode m] [--workers k]
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kinmarket/errors.hpp"
#include "kinmarket/experiment.hpp"

namespace {

constexpr int kConfigExit = 1;
constexpr int kNumericalExit = 2;

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        try {
            seeds.push_back(std::stoull(item, &used));
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw kinmarket::ConfigError("--seeds: bad seed '" + item + "'");
        }
    }
    return seeds;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kinetic stock/bond market simulator"};

    std::string target;
    std::string config_path;
    std::string out_dir = "out";
    std::string seeds;
    std::string mode;
    std::size_t steps = 0;
    double dt = 0.0;
    unsigned workers = 0;

    app.add_option("target", target, "mode (simulate, price-ode, fokker-planck, compare) or preset (test1..test3)")
        ->required();
    app.add_option("--config", config_path, "experiment config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seeds", seeds, "comma-separated seed list");
    auto* steps_opt = app.add_option("--steps", steps, "number of market iterations");
    auto* dt_opt = app.add_option("--dt", dt, "ODE time step")->check(CLI::PositiveNumber);
    app.add_option("--mode", mode, "override the mode of a preset or config");
    auto* workers_opt = app.add_option("--workers", workers, "concurrent seeds")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigExit;
    }

    try {
        using namespace kinmarket;
        ExperimentConfig config;
        const auto as_mode = mode_from_string(target);
        if (as_mode) {
            if (config_path.empty()) {
                throw ConfigError("mode '" + target + "' needs --config");
            }
            config = load_config(config_path);
            config.mode = *as_mode;
        } else {
            config = preset(target);
            if (!config_path.empty()) {
                config = load_config(config_path, config);
            }
        }

        if (!mode.empty()) {
            const auto m = mode_from_string(mode);
            if (!m) throw ConfigError("unknown mode '" + mode + "'");
            config.mode = *m;
        }
        if (!seeds.empty()) config.seeds = parse_seeds(seeds);
        if (steps_opt->count() > 0) {
            config.steps = steps;
            std::erase_if(config.snapshot_times, [steps](std::size_t t) { return t > steps; });
        }
        if (dt_opt->count() > 0) config.dt = dt;
        if (workers_opt->count() > 0) config.workers = workers;
        config.out_dir = out_dir;

        const auto files = run(config);
        std::cout << "wrote " << files.size() << " files to " << config.out_dir.string() << '\n';
        return 0;
    } catch (const kinmarket::ConfigError& e) {
        std::cerr << "kinmarket: configuration error: " << e.what() << '\n';
        return kConfigExit;
    } catch (const kinmarket::NumericalError& e) {
        std::cerr << "kinmarket: numerical failure: " << e.what() << '\n';
        return kNumericalExit;
    } catch (const std::exception& e) {
        std::cerr << "kinmarket: " << e.what() << '\n';
        return kConfigExit;
    }
}
