// pathwise-hj: runs one experiment scenario and writes CSV tables, the config
// echo and summary.json. Exit status 1 when an assertion fails, 2 on errors.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "phj/config.hpp"
#include "phj/errors.hpp"
#include "phj/experiments.hpp"

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> stream;
    std::string out;
    std::vector<std::string> overrides;
};

int run(const std::string& scenario, const Options& opt) {
    phj::ExperimentConfig cfg(scenario);
    if (!opt.config.empty()) {
        cfg = phj::ExperimentConfig::load(opt.config);
        if (cfg.scenario() != scenario) {
            throw phj::ConfigError("config file is for scenario '" + cfg.scenario() + "', not '" + scenario + "'");
        }
    }
    if (opt.seed) cfg.set_seed(*opt.seed);
    if (opt.stream) cfg.set_stream(*opt.stream);
    for (const std::string& kv : opt.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw phj::ConfigError("--set expects key=value, got " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!opt.out.empty()) cfg.set_output_dir(opt.out);

    const auto t0 = std::chrono::steady_clock::now();
    const phj::RunArtifact art = phj::run_scenario(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    art.write(cfg.output_dir());

    for (const auto& a : art.assertions) {
        std::printf("%s  %-40s measured=%.6g %s %.6g (tol %.3g)\n", a.passed ? "PASS" : "FAIL", a.name.c_str(),
                    a.measured, phj::Assertion::kind_name(a.kind), a.expected, a.tolerance);
    }
    std::printf("%s: %zu tables, %zu assertions, %s in %.2f s -> %s\n", scenario.c_str(), art.tables.size(),
                art.assertions.size(), art.passed() ? "passed" : "FAILED", secs, cfg.output_dir().c_str());
    return art.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pathwise Hamilton-Jacobi experiments"};
    app.set_version_flag("--version", std::string("pathwise-hj ") + phj::kVersion);
    bool list = false;
    app.add_flag("--list-scenarios", list, "Print the scenario names and exit");
    app.require_subcommand(0, 1);

    Options opt;
    std::string chosen;
    for (const std::string& name : phj::scenario_names()) {
        CLI::App* sub = app.add_subcommand(name, "Run the " + name + " scenario");
        sub->add_option("--config", opt.config, "INI configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", opt.seed, "RNG seed (overrides the config)");
        sub->add_option("--stream", opt.stream, "RNG stream (overrides the config)");
        sub->add_option("--out", opt.out, "Output directory (overrides the config)");
        sub->add_option("--set", opt.overrides, "Override a parameter, key=value (repeatable)");
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and --version exit 0; every usage error maps to 2.
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (list) {
        for (const std::string& name : phj::scenario_names()) std::cout << name << '\n';
        return 0;
    }
    if (chosen.empty()) {
        std::cerr << app.help();
        return 2;
    }
    try {
        return run(chosen, opt);
    } catch (const phj::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
