#pragma once

// Experiment configuration: INI-style sections with `key = value` lines and
// comma-separated lists. Every scenario has a schema of admissible keys with
// defaults; unknown keys are rejected and the echo contains the full
// effective configuration so a run can be replayed bit for bit.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "phj/paths.hpp"

namespace phj {

struct ParamSpec {
    std::string section;  // "params" or "resolution"
    std::string key;
    std::string default_value;
    std::string help;
};

const std::vector<std::string>& scenario_names();
/// Throws ConfigError for an unknown scenario.
const std::vector<ParamSpec>& scenario_schema(const std::string& scenario);

class ExperimentConfig {
public:
    /// Defaults for the scenario.
    explicit ExperimentConfig(std::string scenario);

    static ExperimentConfig parse(std::istream& is);
    static ExperimentConfig load(const std::string& path);

    const std::string& scenario() const { return scenario_; }
    RngSeed seed() const { return seed_; }
    void set_seed(std::uint64_t seed) { seed_.seed = seed; }
    void set_stream(std::uint64_t stream) { seed_.stream = stream; }
    const std::string& output_dir() const { return output_dir_; }
    void set_output_dir(std::string dir) { output_dir_ = std::move(dir); }

    /// Overrides a schema key (section inferred from the schema).
    void set(const std::string& key, const std::string& value);

    std::string text(const std::string& key) const;
    double number(const std::string& key) const;
    long long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<int> integers(const std::string& key) const;

    /// Canonical text form; parse(echo()) reproduces this configuration.
    std::string echo() const;

    bool operator==(const ExperimentConfig& other) const;

private:
    const ParamSpec& spec(const std::string& key) const;

    std::string scenario_;
    RngSeed seed_{};
    std::string output_dir_ = "out";
    std::map<std::string, std::string> values_;
};

}  // namespace phj
