#include "kinmarket/experiment.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include "kinmarket/analysis.hpp"
#include "kinmarket/csv.hpp"
#include "kinmarket/errors.hpp"

namespace kinmarket {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_se(const std::vector<double>& xs) {
    const auto n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (const double x : xs) sum += x;
    const double mean = sum / n;
    if (xs.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

FpMomentPoint fp_point_at(const ExperimentConfig& config, std::size_t t) {
    const FpParams fp = FpParams::from_model(config.model_params(0), config.curve);
    const double w0 = config.initial_mean_wealth();
    return integrate_fp_moments(fp, w0, w0 * w0, config.r * static_cast<double>(t), config.r * config.dt).back();
}

const AgentEnsemble& snapshot_of(const SimulationRecord& run, std::size_t t) {
    const auto it = run.snapshots.find(t);
    if (it == run.snapshots.end()) {
        if (t == run.params.steps) {
            return run.final;
        }
        throw ConfigError("no wealth snapshot recorded at t=" + std::to_string(t));
    }
    return it->second;
}

CsvTable states_table(const std::vector<MarketState>& states) {
    CsvTable table{{"t", "S", "mean_w", "second_w", "mean_gamma"}, {}};
    table.rows.reserve(states.size());
    for (const auto& s : states) {
        table.rows.push_back({static_cast<double>(s.t), s.S, s.mean_w, s.second_w, s.mean_gamma});
    }
    return table;
}

class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    ~OutputSet() {
        if (committed_) {
            return;
        }
        std::error_code ec;
        for (const auto& p : written_) {
            std::filesystem::remove(p, ec);
        }
    }

    void csv(const std::string& name, const CsvTable& table) {
        const auto path = dir_ / name;
        written_.push_back(path);
        write_csv(path, table);
    }

    void text(const std::string& name, const std::string& body) {
        const auto path = dir_ / name;
        written_.push_back(path);
        std::ofstream out(path, std::ios::binary);
        out << body;
        if (!out) {
            throw std::runtime_error("write failed for " + path.string());
        }
    }

    std::vector<std::filesystem::path> commit() {
        committed_ = true;
        return written_;
    }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    bool committed_ = false;
};

void write_simulation(OutputSet& out, const ExperimentConfig& config, const std::vector<SimulationRecord>& runs) {
    for (std::size_t k = 0; k < runs.size(); ++k) {
        out.csv("timeseries_seed" + std::to_string(config.seeds[k]) + ".csv", states_table(runs[k].states));
    }
    out.csv("timeseries.csv", states_table(average_states(runs)));

    for (const auto t : config.snapshot_times) {
        CsvTable table{{"seed", "agent", "wealth"}, {}};
        for (std::size_t k = 0; k < runs.size(); ++k) {
            const auto& w = snapshot_of(runs[k], t).wealth;
            for (std::size_t i = 0; i < w.size(); ++i) {
                table.rows.push_back({static_cast<double>(config.seeds[k]), static_cast<double>(i), w[i]});
            }
        }
        out.csv("wealth_snapshot_" + std::to_string(t) + ".csv", table);
    }
}

void write_price_ode(OutputSet& out, const ExperimentConfig& config) {
    const auto path = integrate_price_ode(config.curve, config.S0, config.r, config.D,
                                          static_cast<double>(config.steps), config.dt);
    CsvTable table{{"t", "S", "mean_w"}, {}};
    for (const auto& p : path) {
        table.rows.push_back({p.t, p.S, config.n_pc * p.S / config.curve.fraction(p.S)});
    }
    out.csv("ode_timeseries.csv", table);
}

void write_fokker_planck(OutputSet& out, const ExperimentConfig& config) {
    const FpParams fp = FpParams::from_model(config.model_params(0), config.curve);
    const double w0 = config.initial_mean_wealth();
    const auto traj = integrate_fp_moments(fp, w0, w0 * w0, config.r * static_cast<double>(config.steps),
                                           config.r * config.dt);
    CsvTable table{{"tau", "S", "mean_w", "second_w", "A", "B", "a", "b"}, {}};
    for (const auto& p : traj) {
        const double a = std::log(p.mean_w);
        const double b = std::max(0.0, std::log(p.second_w / (p.mean_w * p.mean_w)));
        table.rows.push_back({p.tau, p.S, p.mean_w, p.second_w, p.A, p.B, a, b});
    }
    out.csv("fp_timeseries.csv", table);

    for (const auto t : config.snapshot_times) {
        const auto p = fp_point_at(config, t);
        LognormalParams ln{};
        try {
            ln = lognormal_from_moments(p.mean_w, p.second_w);
        } catch (const DegenerateDistribution&) {
            continue; // point mass at t = 0
        }
        const LognormalParams rescaled{std::log(w0), ln.b};
        const double scale = w0 / p.mean_w;
        const double center = ln.a - 0.5 * ln.b;
        const double half = 5.0 * std::sqrt(ln.b);
        const int points = 201;
        CsvTable curve{{"w", "density", "v", "density_v"}, {}};
        for (int k = 0; k < points; ++k) {
            const double w = std::exp(center - half + 2.0 * half * k / (points - 1));
            const double v = scale * w;
            curve.rows.push_back({w, lognormal_pdf(ln, w), v, lognormal_pdf(rescaled, v)});
        }
        out.csv("lognormal_curve_" + std::to_string(t) + ".csv", curve);
    }
}

void write_comparison(OutputSet& out, const ExperimentConfig& config, const std::vector<SimulationRecord>& runs) {
    const double w0 = config.initial_mean_wealth();
    CsvTable metrics{{"t", "tau", "gini", "gini_se", "ks", "ks_se", "fitted_a", "fitted_b", "fitted_b_se", "fp_a",
                      "fp_b"},
                     {}};
    for (const auto t : config.snapshot_times) {
        const auto m = snapshot_metrics(config, runs, t);
        metrics.rows.push_back({static_cast<double>(m.t), m.tau, m.gini, m.gini_se, m.ks, m.ks_se, m.fitted_a,
                                m.fitted_b, m.fitted_b_se, m.fp_a, m.fp_b});

        std::vector<double> pooled;
        std::vector<double> lorenz_sum(config.lorenz_grid + 1, 0.0);
        for (const auto& run : runs) {
            const auto& w = snapshot_of(run, t).wealth;
            const auto scaled = self_similar_rescale(w, w0, sample_moments(w).mean);
            pooled.insert(pooled.end(), scaled.begin(), scaled.end());
            const auto lc = lorenz_curve(w, config.lorenz_grid);
            for (std::size_t k = 0; k < lc.size(); ++k) {
                lorenz_sum[k] += lc[k].L;
            }
        }

        CsvTable lorenz{{"F", "L"}, {}};
        for (std::size_t k = 0; k <= config.lorenz_grid; ++k) {
            lorenz.rows.push_back({static_cast<double>(k) / static_cast<double>(config.lorenz_grid),
                                   lorenz_sum[k] / static_cast<double>(runs.size())});
        }
        out.csv("lorenz_" + std::to_string(t) + ".csv", lorenz);

        const LognormalParams limit{std::log(w0), m.fp_b};
        CsvTable hist{{"v", "width", "density", "fp_density"}, {}};
        for (const auto& bin : histogram(pooled, config.histogram_bins, true)) {
            hist.rows.push_back({bin.center, bin.width, bin.density, m.fp_b > 0.0 ? lognormal_pdf(limit, bin.center)
                                                                                  : kNaN});
        }
        out.csv("histogram_" + std::to_string(t) + ".csv", hist);
    }
    out.csv("metrics.csv", metrics);
}

} // namespace

std::vector<MarketState> average_states(const std::vector<SimulationRecord>& runs) {
    if (runs.empty()) {
        return {};
    }
    std::vector<MarketState> avg(runs.front().states.size());
    const auto n = static_cast<double>(runs.size());
    for (std::size_t t = 0; t < avg.size(); ++t) {
        MarketState s;
        s.t = runs.front().states[t].t;
        for (const auto& run : runs) {
            const auto& x = run.states.at(t);
            s.S += x.S;
            s.mean_w += x.mean_w;
            s.second_w += x.second_w;
            s.mean_gamma += x.mean_gamma;
        }
        s.S /= n;
        s.mean_w /= n;
        s.second_w /= n;
        s.mean_gamma /= n;
        avg[t] = s;
    }
    return avg;
}

std::vector<SimulationRecord> simulate_seeds(const ExperimentConfig& config) {
    config.validate();
    std::vector<SimulationRecord> runs(config.seeds.size());
    EngineOptions options;
    options.snapshot_times = config.snapshot_times;

    const unsigned workers =
        std::max(1U, std::min<unsigned>(config.workers, static_cast<unsigned>(config.seeds.size())));
    if (workers == 1) {
        for (std::size_t k = 0; k < runs.size(); ++k) {
            runs[k] = run_simulation(config.model_params(config.seeds[k]), config.curve, config.S0, config.bonds0,
                                     options);
        }
        return runs;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = next++; k < runs.size(); k = next++) {
                        runs[k] = run_simulation(config.model_params(config.seeds[k]), config.curve, config.S0,
                                                 config.bonds0, options);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return runs;
}

SnapshotMetrics snapshot_metrics(const ExperimentConfig& config, const std::vector<SimulationRecord>& runs,
                                 std::size_t t) {
    const double w0 = config.initial_mean_wealth();
    const auto fp = fp_point_at(config, t);

    SnapshotMetrics m{};
    m.t = t;
    m.tau = config.r * static_cast<double>(t);
    m.fp_a = std::log(fp.mean_w);
    m.fp_b = std::max(0.0, std::log(fp.second_w / (fp.mean_w * fp.mean_w)));

    std::vector<double> ginis;
    std::vector<double> kss;
    std::vector<double> as;
    std::vector<double> bs;
    for (const auto& run : runs) {
        const auto& w = snapshot_of(run, t).wealth;
        ginis.push_back(gini(w));
        const auto mom = sample_moments(w);
        try {
            const auto fit = lognormal_from_moments(mom.mean, mom.second);
            as.push_back(fit.a);
            bs.push_back(fit.b);
        } catch (const DegenerateDistribution&) {
            as.push_back(std::log(mom.mean));
            bs.push_back(0.0);
        }
        if (m.fp_b > 0.0) {
            const auto scaled = self_similar_rescale(w, w0, mom.mean);
            kss.push_back(ks_distance(scaled, LognormalParams{std::log(w0), m.fp_b}));
        }
    }
    const auto g = mean_se(ginis);
    const auto a = mean_se(as);
    const auto b = mean_se(bs);
    m.gini = g.mean;
    m.gini_se = g.se;
    m.fitted_a = a.mean;
    m.fitted_b = b.mean;
    m.fitted_b_se = b.se;
    if (kss.empty()) {
        m.ks = kNaN;
        m.ks_se = kNaN;
    } else {
        const auto k = mean_se(kss);
        m.ks = k.mean;
        m.ks_se = k.se;
    }
    return m;
}

std::vector<std::filesystem::path> run(const ExperimentConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);

    OutputSet out(config.out_dir);
    out.text("params.echo", to_config_text(config));

    const bool simulate = config.mode == Mode::Simulate || config.mode == Mode::Compare;
    std::vector<SimulationRecord> runs;
    if (simulate) {
        runs = simulate_seeds(config);
        write_simulation(out, config, runs);
    }
    if (config.mode == Mode::PriceOde || config.mode == Mode::Compare) {
        write_price_ode(out, config);
    }
    if (config.mode == Mode::FokkerPlanck || config.mode == Mode::Compare) {
        write_fokker_planck(out, config);
    }
    if (config.mode == Mode::Compare) {
        write_comparison(out, config, runs);
    }
    return out.commit();
}

} // namespace kinmarket
