#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vianalab/io.hpp"
#include "vianalab/map.hpp"

namespace viana {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value file with [section] headers, '#' comments, and a closed key
// set: unknown section.key pairs are rejected at parse time. Values are kept
// as strings; typed getters validate on access, and symbolic values
// ("misiurewicz", "auto", "survey") are resolved by the consumers.
class ExperimentConfig {
public:
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<std::int64_t> get_int_list(const std::string& section, const std::string& key,
                                           const std::vector<std::int64_t>& fallback) const;

    // Resolves [map]: a0 = "misiurewicz" and beta = "auto" become numbers,
    // bounds re-validated through MapParams::create.
    MapParams map_params() const;

    // Full key set with every default filled in, for the summary audit trail.
    Json to_json() const;

private:
    void insert(const std::string& section, const std::string& key,
                const std::string& value, int line);
    std::map<std::string, std::string> kv_;  // "section.key" -> value
};

}  // namespace viana
