#include "phj/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "phj/errors.hpp"

namespace phj {

namespace {

using Schema = std::vector<ParamSpec>;

const std::map<std::string, Schema>& schemas() {
    static const std::map<std::string, Schema> s = {
        {"solve",
         {{"params", "engine", "both", "hopf, fd or both"},
          {"params", "hamiltonian", "power", "power (coef |p|^beta) or truncated (H_{beta,delta})"},
          {"params", "beta", "0.5", "exponent of the Hamiltonian"},
          {"params", "coef", "2", "coefficient of the power Hamiltonian"},
          {"params", "delta", "0.25", "truncation level"},
          {"params", "L", "1", "slope bound"},
          {"params", "u0_a", "1", "initial datum |x| v a"},
          {"params", "path", "teeth", "teeth, zero, brownian, walk or file"},
          {"params", "duration", "2", "teeth duration or path horizon"},
          {"params", "steps", "1024", "Brownian steps"},
          {"params", "walk_n", "8", "random-walk scaling n"},
          {"params", "path_file", "", "CSV t,w for path = file"},
          {"params", "sample_times", "0,1,2", "snapshot times"},
          {"resolution", "dual_nodes", "4097", "conjugate grid nodes on [0, L]"},
          {"resolution", "h_nodes", "1025", "Hamiltonian profile nodes"},
          {"resolution", "x_max", "4", "output window |x| <= x_max"},
          {"resolution", "x_nodes", "513", "output nodes on [0, x_max]"},
          {"resolution", "fd_dx", "0.0078125", "FD spacing"},
          {"resolution", "fd_margin", "2", "FD domain margin beyond x_max"},
          {"resolution", "cfl", "0.9", "FD CFL factor"}}},
        {"paths",
         {{"params", "kind", "teeth", "teeth, brownian, walk"},
          {"params", "duration", "2", "horizon (teeth: multiple of 2)"},
          {"params", "steps", "4096", "Brownian steps"},
          {"params", "walk_n", "16", "random-walk scaling n"},
          {"params", "mollify_delta", "0", "hat mollification width (0 disables)"},
          {"params", "deltas", "1,0.5,0.25,0.125", "oscillation thresholds"},
          {"params", "p_list", "1,2,3", "p-variation exponents"},
          {"params", "holder_alpha", "0.5", "Hoelder exponent"},
          {"params", "alpha", "0.5", "interpolation exponent for the P_{alpha,inf} estimate"},
          {"params", "n_max", "12", "K-profile levels"}}},
        {"norms",
         {{"params", "function", "power", "power, abs, half_square, x_abs_x, sin"},
          {"params", "beta", "0.5", "exponent for power"},
          {"params", "L", "1", "domain [-L, L]"},
          {"params", "s", "1", "Besov smoothness"},
          {"params", "p", "inf", "Besov integrability"},
          {"params", "q", "1", "Besov summability"},
          {"params", "n_levels", "10", "Besov dyadic levels"},
          {"params", "k_levels", "14", "K-profile levels"},
          {"params", "alpha_list", "0.75,0.25", "membership exponents"},
          {"params", "membership_N", "64", "membership levels"},
          {"resolution", "nodes", "65537", "grid nodes"}}},
        {"blowup",
         {{"params", "alpha", "0.25", "path regularity exponent"},
          {"params", "beta", "0.25", "Hamiltonian exponent"},
          {"params", "n_list", "2,3,4,5,6,7,8,9,10", "scaling levels"},
          {"params", "horizon", "1", "final time T"},
          {"params", "slope_tolerance", "0.1", "tolerance on the fitted slope"},
          {"resolution", "dual_nodes", "4097", "conjugate grid nodes"}}},
        {"limit",
         {{"params", "alpha", "0.5", "path exponent; beta = 1 - alpha"},
          {"params", "c0", "1", "plateau constant"},
          {"params", "n_list", "2,4,8", "scaling levels"},
          {"params", "horizon", "1", "final time"},
          {"params", "threshold", "0.1", "bound on the final error"},
          {"params", "probe_dt", "0.0625", "probe time step"},
          {"params", "probe_x_max", "2", "probe window"},
          {"params", "probe_dx", "0.015625", "probe space step"},
          {"resolution", "dual_nodes", "4097", "conjugate grid nodes"}}},
        {"brownian",
         {{"params", "samples", "200", "Brownian paths"},
          {"params", "n_levels", "16", "levels n = 2..n_levels"},
          {"params", "dt_log2", "16", "paths use dt = 2^-dt_log2 on [0,1]"},
          {"params", "quantile_bound", "20", "bound on the 95th percentiles"},
          {"params", "walk_M", "10", "exit level M"},
          {"params", "walk_t", "10000", "time t"},
          {"params", "lambda", "2", "tail parameter"},
          {"params", "walks", "2000", "walks for the tail frequency"},
          {"params", "epochs", "10000", "exit epochs for the mean"}}},
        {"walks",
         {{"params", "n_list", "4,8,16", "walk scalings"},
          {"params", "samples", "500", "samples per ensemble"},
          {"params", "x_probes", "0,0.5,1", "probe points"},
          {"params", "horizon", "1", "final time"},
          {"params", "beta", "0.75", "H_{beta,delta} exponent"},
          {"params", "delta", "0.25", "H_{beta,delta} truncation"},
          {"params", "L", "1", "slope bound"},
          {"params", "u0_a", "1", "initial datum |x| v a"},
          {"params", "reference_steps", "1024", "steps of the Brownian interpolants"},
          {"resolution", "dual_nodes", "513", "conjugate grid nodes"}}},
        {"crossval",
         {{"params", "resolutions", "32,64,128,256", "FD cells per unit length"},
          {"params", "beta", "0.5", "exponent of H = |p|^beta / beta"},
          {"params", "x_max", "6", "FD half-width"},
          {"params", "window", "3", "comparison window |x| <= window"},
          {"params", "min_order", "0.8", "required convergence order"},
          {"resolution", "dual_nodes", "4097", "conjugate grid nodes"},
          {"resolution", "h_nodes", "1025", "Hamiltonian profile nodes"}}},
        {"stability",
         {{"params", "trials", "10", "randomized trials"},
          {"params", "eps_levels", "10", "epsilon = 2^-1 .. 2^-eps_levels"},
          {"params", "beta", "0.5", "H_{beta,delta} exponent"},
          {"params", "delta", "0.25", "H_{beta,delta} truncation"},
          {"params", "L", "1", "slope bound"},
          {"params", "u0_a", "1", "initial datum |x| v a"},
          {"params", "max_variation", "2", "allowed max/min ratio across the sweep"},
          {"params", "ratio_bound", "2", "recorded constant bounding the stability ratio"},
          {"resolution", "dual_nodes", "2049", "conjugate grid nodes"},
          {"resolution", "h_nodes", "2049", "Hamiltonian grid nodes on [-L, L]"}}},
    };
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_number(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
}

long long to_integer(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
    }
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : schemas()) n.push_back(k);
        return n;
    }();
    return names;
}

const std::vector<ParamSpec>& scenario_schema(const std::string& scenario) {
    const auto it = schemas().find(scenario);
    if (it == schemas().end()) throw ConfigError("unknown scenario '" + scenario + "'");
    return it->second;
}

ExperimentConfig::ExperimentConfig(std::string scenario) : scenario_(std::move(scenario)) {
    for (const ParamSpec& p : scenario_schema(scenario_)) values_[p.key] = p.default_value;
}

ExperimentConfig ExperimentConfig::parse(std::istream& is) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }
    const auto run = tree.get_child_optional("run");
    if (!run) throw ConfigError("config needs a [run] section");
    const auto scen = run->get_optional<std::string>("scenario");
    if (!scen) throw ConfigError("config [run] needs 'scenario'");
    ExperimentConfig cfg(trim(*scen));
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw ConfigError("config keys must live inside a section");
        if (section == "run") {
            for (const auto& [key, node] : body) {
                const std::string v = trim(node.data());
                if (key == "scenario") continue;
                if (key == "seed") {
                    cfg.seed_.seed = static_cast<std::uint64_t>(to_integer(key, v));
                } else if (key == "stream") {
                    cfg.seed_.stream = static_cast<std::uint64_t>(to_integer(key, v));
                } else if (key == "output_dir") {
                    cfg.output_dir_ = v;
                } else {
                    throw ConfigError("unknown key [run] " + key);
                }
            }
            continue;
        }
        if (section != "params" && section != "resolution") {
            throw ConfigError("unknown config section [" + section + "]");
        }
        for (const auto& [key, node] : body) {
            const ParamSpec& s = cfg.spec(key);
            if (s.section != section) {
                throw ConfigError("key '" + key + "' belongs in [" + s.section + "], not [" + section + "]");
            }
            cfg.values_[key] = trim(node.data());
        }
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in);
}

const ParamSpec& ExperimentConfig::spec(const std::string& key) const {
    for (const ParamSpec& p : scenario_schema(scenario_)) {
        if (p.key == key) return p;
    }
    throw ConfigError("unknown key '" + key + "' for scenario '" + scenario_ + "'");
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    spec(key);
    values_[key] = trim(value);
}

std::string ExperimentConfig::text(const std::string& key) const {
    spec(key);
    return values_.at(key);
}

double ExperimentConfig::number(const std::string& key) const { return to_number(key, text(key)); }

long long ExperimentConfig::integer(const std::string& key) const { return to_integer(key, text(key)); }

bool ExperimentConfig::flag(const std::string& key) const {
    const std::string v = text(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<double> ExperimentConfig::numbers(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& s : split_list(text(key))) out.push_back(to_number(key, s));
    return out;
}

std::vector<int> ExperimentConfig::integers(const std::string& key) const {
    std::vector<int> out;
    for (const std::string& s : split_list(text(key))) out.push_back(static_cast<int>(to_integer(key, s)));
    return out;
}

std::string ExperimentConfig::echo() const {
    std::ostringstream os;
    os << "[run]\n"
       << "scenario = " << scenario_ << '\n'
       << "seed = " << seed_.seed << '\n'
       << "stream = " << seed_.stream << '\n'
       << "output_dir = " << output_dir_ << '\n';
    for (const char* section : {"params", "resolution"}) {
        bool header = false;
        for (const ParamSpec& p : scenario_schema(scenario_)) {
            if (p.section != section) continue;
            if (!header) {
                os << "\n[" << section << "]\n";
                header = true;
            }
            os << p.key << " = " << values_.at(p.key) << '\n';
        }
    }
    return os.str();
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
    return scenario_ == other.scenario_ && seed_.seed == other.seed_.seed &&
           seed_.stream == other.seed_.stream && output_dir_ == other.output_dir_ &&
           values_ == other.values_;
}

}  // namespace phj
