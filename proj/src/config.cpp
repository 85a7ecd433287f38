#include "vianalab/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace viana {

namespace {

struct KnownKey {
    const char* section;
    const char* key;
    const char* fallback;
};

// the closed key set with the preset defaults
constexpr std::array kKnown = {
    KnownKey{"map", "d", "16"},
    KnownKey{"map", "a0", "misiurewicz"},
    KnownKey{"map", "alpha", "0.01"},
    KnownKey{"map", "beta", "auto"},
    KnownKey{"orbit", "theta0", "random"},
    KnownKey{"orbit", "x0", "random"},
    KnownKey{"orbit", "n", "100000"},
    KnownKey{"exponents", "n_points", "100"},
    KnownKey{"exponents", "n_iter", "100000"},
    KnownKey{"exponents", "eps", "auto"},
    KnownKey{"exponents", "c0", "survey"},
    KnownKey{"exponents", "c0_assumed", "1.2"},
    KnownKey{"exponents", "reorth_period", "5"},
    KnownKey{"exponents", "window", "50"},
    KnownKey{"exponents", "stderr_threshold", "0.01"},
    KnownKey{"hyptimes", "sigma", "auto"},
    KnownKey{"hyptimes", "delta", "auto"},
    KnownKey{"hyptimes", "b", "auto"},
    KnownKey{"hyptimes", "gamma", "0.1"},
    KnownKey{"hyptimes", "horizons", "1000,10000,100000"},
    KnownKey{"hyptimes", "n_points", "20"},
    KnownKey{"hyptimes", "n_pairs", "50"},
    KnownKey{"hyptimes", "n_probes", "200"},
    KnownKey{"hyptimes", "separation_horizon", "10000"},
    KnownKey{"recurrence", "n", "1000000"},
    KnownKey{"recurrence", "n_orbits", "10"},
    KnownKey{"recurrence", "k_max", "20"},
    KnownKey{"ulam", "n_theta", "256"},
    KnownKey{"ulam", "n_x", "512"},
    KnownKey{"ulam", "band", "0.05"},
    KnownKey{"ulam", "refine", "4"},
    KnownKey{"ulam", "samples_per_cell", "64"},
    KnownKey{"ulam", "tol", "1e-10"},
    KnownKey{"ulam", "max_iter", "20000"},
    KnownKey{"ulam", "refine_check", "false"},
    KnownKey{"ulam", "e1_check", "true"},
    KnownKey{"ulam", "export_matrix", "false"},
    KnownKey{"thermo", "cut", "auto"},
    KnownKey{"thermo", "lambda0", "0.01"},
    KnownKey{"thermo", "phi", "zero"},
    KnownKey{"thermo", "phi_amplitude", "0"},
    KnownKey{"thermo", "fixture", "none"},
    KnownKey{"thermo", "max_period", "12"},
    KnownKey{"thermo", "tol", "1e-11"},
    KnownKey{"thermo", "gap_check", "true"},
    KnownKey{"run", "seed", "1"},
    KnownKey{"run", "threads", "0"},
    KnownKey{"run", "out", "out"},
    KnownKey{"run", "reproducible", "false"},
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool known(const std::string& section, const std::string& key) {
    for (const auto& k : kKnown)
        if (section == k.section && key == k.key) return true;
    return false;
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& v) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("config: " + section + "." + key + " is not a number: " + v);
    }
    if (used != v.size())
        throw ConfigError("config: " + section + "." + key + " is not a number: " + v);
    return d;
}

}  // namespace

void ExperimentConfig::insert(const std::string& section, const std::string& key,
                              const std::string& value, int line) {
    if (!known(section, key))
        throw ConfigError("config: unknown key '" + section + "." + key + "' (line " +
                          std::to_string(line) + ")");
    kv_[section + "." + key] = value;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key=value at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config: key outside a [section] at line " +
                              std::to_string(lineno));
        cfg.insert(section, key, value, lineno);
    }
    return cfg;
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
    return kv_.count(section + "." + key) != 0;
}

std::string ExperimentConfig::get(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    auto it = kv_.find(section + "." + key);
    return it == kv_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& section, const std::string& key,
                                    double fallback) const {
    auto it = kv_.find(section + "." + key);
    if (it == kv_.end()) return fallback;
    return parse_double(section, key, it->second);
}

std::int64_t ExperimentConfig::get_int(const std::string& section, const std::string& key,
                                       std::int64_t fallback) const {
    auto it = kv_.find(section + "." + key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: " + section + "." + key +
                          " is not an integer: " + it->second);
    }
}

bool ExperimentConfig::get_bool(const std::string& section, const std::string& key,
                                bool fallback) const {
    auto it = kv_.find(section + "." + key);
    if (it == kv_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: " + section + "." + key + " is not a boolean: " + v);
}

std::vector<std::int64_t> ExperimentConfig::get_int_list(
    const std::string& section, const std::string& key,
    const std::vector<std::int64_t>& fallback) const {
    auto it = kv_.find(section + "." + key);
    std::string raw = it == kv_.end() ? "" : it->second;
    if (raw.empty()) return fallback;
    std::vector<std::int64_t> out;
    std::istringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw ConfigError("config: " + section + "." + key + " has a bad entry: " + item);
        }
    }
    if (out.empty())
        throw ConfigError("config: " + section + "." + key + " is empty");
    return out;
}

MapParams ExperimentConfig::map_params() const {
    int d = static_cast<int>(get_int("map", "d", 16));
    std::string a0s = get("map", "a0", "misiurewicz");
    double a0 = a0s == "misiurewicz" ? MapParams::misiurewicz_a0()
                                     : parse_double("map", "a0", a0s);
    double alpha = get_double("map", "alpha", 0.01);
    std::string betas = get("map", "beta", "auto");
    double beta = betas == "auto" ? MapParams::default_beta(a0, alpha)
                                  : parse_double("map", "beta", betas);
    try {
        return MapParams::create(d, a0, alpha, beta);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: invalid [map] parameters: ") + e.what());
    }
}

Json ExperimentConfig::to_json() const {
    Json j;
    for (const auto& k : kKnown) {
        std::string v = get(k.section, k.key, k.fallback);
        j[k.section][k.key] = v;
    }
    // resolved numeric map parameters for the audit trail
    MapParams mp = map_params();
    j["resolved"]["a0"] = mp.a0;
    j["resolved"]["beta"] = mp.beta;
    j["resolved"]["d"] = mp.d;
    j["resolved"]["alpha"] = mp.alpha;
    return j;
}

}  // namespace viana
