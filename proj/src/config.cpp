#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "kinmarket/csv.hpp"
#include "kinmarket/errors.hpp"
#include "kinmarket/experiment.hpp"

namespace kinmarket {

namespace {

constexpr std::pair<Mode, std::string_view> kModeNames[] = {
    {Mode::Simulate, "simulate"},
    {Mode::PriceOde, "price-ode"},
    {Mode::FokkerPlanck, "fokker-planck"},
    {Mode::Compare, "compare"},
};

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || text.front() == '-') {
        throw ConfigError("'" + key + "': expected a nonnegative integer, got '" + text + "'");
    }
    return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    std::istringstream ls(text);
    std::string item;
    while (std::getline(ls, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) {
            out.push_back(static_cast<T>(parse_unsigned(key, item)));
        }
    }
    return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "," : "") + std::to_string(values[i]);
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"experiment", {"name", "mode"}},
        {"model", {"r", "D", "zeta", "eta_rel_sd", "eta_scaling", "n_pc", "N", "steps"}},
        {"curve", {"type", "C", "C1", "C2"}},
        {"market", {"S0", "bonds0"}},
        {"run", {"seeds", "snapshot_times", "dt", "histogram_bins", "lorenz_grid", "workers"}},
    };
    return keys;
}

} // namespace

std::string to_string(Mode mode) {
    for (const auto& [m, name] : kModeNames) {
        if (m == mode) {
            return std::string(name);
        }
    }
    return "simulate";
}

std::optional<Mode> mode_from_string(std::string_view name) {
    for (const auto& [m, n] : kModeNames) {
        if (n == name) {
            return m;
        }
    }
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    model_params(seeds.empty() ? 0 : seeds.front()).validate();
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (!(S0 > 0.0)) throw ConfigError("S0 must be > 0");
    if (!(bonds0 >= 0.0)) throw ConfigError("bonds0 must be >= 0");
    if (!(eta_rel_sd >= 0.0)) throw ConfigError("eta_rel_sd must be >= 0");
    if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
    if (histogram_bins < 1) throw ConfigError("histogram_bins must be >= 1");
    if (lorenz_grid < 1) throw ConfigError("lorenz_grid must be >= 1");
    for (const auto t : snapshot_times) {
        if (t > steps) {
            throw ConfigError("snapshot time " + std::to_string(t) + " exceeds steps");
        }
    }
    if ((mode == Mode::FokkerPlanck || mode == Mode::Compare) && !(r > 0.0)) {
        throw ConfigError("the Fokker-Planck modes need r > 0");
    }
}

ModelParams ExperimentConfig::model_params(std::uint64_t seed) const {
    ModelParams p;
    p.r = r;
    p.D = D;
    p.zeta = zeta;
    p.sigma = eta_scaling == NoiseScaling::Fixed ? eta_rel_sd * S0 : eta_rel_sd;
    p.n_pc = n_pc;
    p.N = N;
    p.steps = steps;
    p.seed = seed;
    p.eta_scaling = eta_scaling;
    return p;
}

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig c;
    c.name = std::string(name);
    c.n_pc = 10.0; // 10000 shares over 1000 agents
    c.N = 1000;
    c.S0 = 50.0;
    c.bonds0 = 500.0;
    c.dt = 0.1;
    c.seeds.clear();
    for (std::uint64_t s = 1; s <= 20; ++s) {
        c.seeds.push_back(s);
    }

    if (name == "test1" || name == "test2") {
        c.mode = Mode::Simulate;
        c.r = 0.01;
        c.D = 0.015;
        c.zeta = 0.2;
        c.eta_rel_sd = 0.3;
        c.eta_scaling = NoiseScaling::Fixed;
        c.steps = 400;
        c.snapshot_times = {400};
        if (name == "test1") {
            c.curve = DemandCurve::constant(0.5);
        } else {
            const double floor = 0.2;
            c.curve = DemandCurve::exponential_decay(floor, std::log((1.0 - floor) / (0.5 - floor)) / c.S0);
        }
        return c;
    }
    if (name == "test3") {
        c.mode = Mode::Compare;
        c.r = 0.001;
        c.D = 0.0015;
        c.zeta = 0.05;
        c.eta_rel_sd = 0.05;
        c.eta_scaling = NoiseScaling::PriceRelative;
        c.steps = 500;
        c.snapshot_times = {50, 200, 500};
        c.curve = DemandCurve::constant(0.5);
        return c;
    }
    throw UnknownPreset("unknown preset '" + std::string(name) + "' (expected test1, test2 or test3)");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    ExperimentConfig c = std::move(base);
    std::map<std::string, std::string> curve_keys;
    for (const auto& [section, body] : tree) {
        const auto known = known_keys().find(section);
        if (known == known_keys().end()) {
            throw ConfigError("config: unknown section or top-level key '" + section + "'");
        }
        for (const auto& [key, node] : body) {
            if (!known->second.contains(key)) {
                throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
            }
            // trailing comments are allowed after a value
            std::string value = node.get_value<std::string>();
            value.erase(std::min(value.find_first_of(";#"), value.size()));
            value.erase(value.find_last_not_of(" \t") + 1);
            const std::string where = section + "." + key;
            if (section == "curve") {
                curve_keys[key] = value;
            } else if (key == "name") {
                c.name = value;
            } else if (key == "mode") {
                const auto m = mode_from_string(value);
                if (!m) throw ConfigError("config: unknown mode '" + value + "'");
                c.mode = *m;
            } else if (key == "r") {
                c.r = parse_double(where, value);
            } else if (key == "D") {
                c.D = parse_double(where, value);
            } else if (key == "zeta") {
                c.zeta = parse_double(where, value);
            } else if (key == "eta_rel_sd") {
                c.eta_rel_sd = parse_double(where, value);
            } else if (key == "eta_scaling") {
                c.eta_scaling = noise_scaling_from_string(value);
            } else if (key == "n_pc") {
                c.n_pc = parse_double(where, value);
            } else if (key == "N") {
                c.N = parse_unsigned(where, value);
            } else if (key == "steps") {
                c.steps = parse_unsigned(where, value);
            } else if (key == "S0") {
                c.S0 = parse_double(where, value);
            } else if (key == "bonds0") {
                c.bonds0 = parse_double(where, value);
            } else if (key == "seeds") {
                c.seeds = parse_list<std::uint64_t>(where, value);
            } else if (key == "snapshot_times") {
                c.snapshot_times = parse_list<std::size_t>(where, value);
            } else if (key == "dt") {
                c.dt = parse_double(where, value);
            } else if (key == "histogram_bins") {
                c.histogram_bins = parse_unsigned(where, value);
            } else if (key == "lorenz_grid") {
                c.lorenz_grid = parse_unsigned(where, value);
            } else if (key == "workers") {
                c.workers = static_cast<unsigned>(parse_unsigned(where, value));
            }
        }
    }

    if (!curve_keys.empty()) {
        const auto need = [&](const std::string& key) {
            const auto it = curve_keys.find(key);
            if (it == curve_keys.end()) throw ConfigError("config: [curve] needs '" + key + "'");
            return parse_double("curve." + key, it->second);
        };
        const auto type = curve_keys.find("type");
        if (type == curve_keys.end()) throw ConfigError("config: [curve] needs 'type'");
        if (type->second == "constant") {
            c.curve = DemandCurve::constant(need("C"));
        } else if (type->second == "exponential") {
            c.curve = DemandCurve::exponential_decay(need("C1"), need("C2"));
        } else {
            throw ConfigError("config: unknown curve type '" + type->second + "'");
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::string to_config_text(const ExperimentConfig& c) {
    std::ostringstream os;
    const auto num = [](double v) { return format_double(v); };
    os << "[experiment]\n"
       << "name = " << c.name << '\n'
       << "mode = " << to_string(c.mode) << "\n\n"
       << "[model]\n"
       << "r = " << num(c.r) << '\n'
       << "D = " << num(c.D) << '\n'
       << "zeta = " << num(c.zeta) << '\n'
       << "eta_rel_sd = " << num(c.eta_rel_sd) << '\n'
       << "eta_scaling = " << to_string(c.eta_scaling) << '\n'
       << "n_pc = " << num(c.n_pc) << '\n'
       << "N = " << c.N << '\n'
       << "steps = " << c.steps << "\n\n"
       << "[curve]\n";
    if (const auto* k = std::get_if<DemandCurve::Constant>(&c.curve.shape())) {
        os << "type = constant\n"
           << "C = " << num(k->fraction) << "\n\n";
    } else {
        const auto& e = std::get<DemandCurve::ExponentialDecay>(c.curve.shape());
        os << "type = exponential\n"
           << "C1 = " << num(e.floor) << '\n'
           << "C2 = " << num(e.rate) << "\n\n";
    }
    os << "[market]\n"
       << "S0 = " << num(c.S0) << '\n'
       << "bonds0 = " << num(c.bonds0) << "\n\n"
       << "[run]\n"
       << "seeds = " << join(c.seeds) << '\n'
       << "snapshot_times = " << join(c.snapshot_times) << '\n'
       << "dt = " << num(c.dt) << '\n'
       << "histogram_bins = " << c.histogram_bins << '\n'
       << "lorenz_grid = " << c.lorenz_grid << '\n'
       << "workers = " << c.workers << '\n';
    return os.str();
}

} // namespace kinmarket
