#pragma once

// Scenario runners. Each run produces CSV tables and a list of assertions with
// measured value, expected value, tolerance and the result under test.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "phj/config.hpp"

namespace phj {

inline constexpr const char* kVersion = "1.0.0";

struct Assertion {
    enum class Kind {
        AtMost,     // measured <= expected + tolerance
        AtLeast,    // measured >= expected - tolerance
        Near,       // |measured - expected| <= tolerance
        LessThan,   // measured < expected (strict)
    };

    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    Kind kind = Kind::Near;
    std::string anchor;  // the result being tested
    bool passed = false;

    static Assertion make(std::string name, double measured, Kind kind, double expected,
                          double tolerance, std::string anchor);
    static const char* kind_name(Kind kind);
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
    std::vector<double> column(const std::string& col) const;
    void write_csv(std::ostream& os) const;
};

struct RunArtifact {
    std::string scenario;
    std::string config_echo;
    RngSeed seed{};
    std::vector<Table> tables;
    std::vector<Assertion> assertions;
    std::map<std::string, std::string> metadata;

    bool passed() const;
    const Table& table(const std::string& name) const;
    const Assertion& assertion(const std::string& name) const;

    /// JSON text of summary.json (deterministic: no timings).
    std::string summary() const;
    /// Writes <table>.csv for every table, config.ini and summary.json.
    void write(const std::filesystem::path& dir) const;
};

RunArtifact run_scenario(const ExperimentConfig& config);

RunArtifact run_solve(const ExperimentConfig& config);
RunArtifact run_paths(const ExperimentConfig& config);
RunArtifact run_norms(const ExperimentConfig& config);
RunArtifact run_blowup(const ExperimentConfig& config);
RunArtifact run_limit(const ExperimentConfig& config);
RunArtifact run_brownian_study(const ExperimentConfig& config);
RunArtifact run_walk_convergence(const ExperimentConfig& config);
RunArtifact run_crossval(const ExperimentConfig& config);
RunArtifact run_stability(const ExperimentConfig& config);

/// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);
/// Linear-interpolated empirical quantile (type 7).
double empirical_quantile(std::vector<double> values, double q);

}  // namespace phj
