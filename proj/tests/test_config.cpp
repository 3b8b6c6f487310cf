#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "phj/config.hpp"
#include "phj/errors.hpp"

using namespace phj;

namespace {

ExperimentConfig parse_text(const std::string& text) {
    std::istringstream is(text);
    return ExperimentConfig::parse(is);
}

}  // namespace

TEST_CASE("every scenario has a schema with defaults") {
    const auto& names = scenario_names();
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::string>{"blowup", "brownian", "crossval", "limit", "norms", "paths", "solve",
                                             "stability", "walks"});
    for (const auto& n : names) {
        const ExperimentConfig cfg(n);
        CHECK(cfg.scenario() == n);
        for (const ParamSpec& p : scenario_schema(n)) {
            CHECK((p.section == "params" || p.section == "resolution"));
            CHECK(cfg.text(p.key) == p.default_value);
        }
    }
    CHECK_THROWS_AS(scenario_schema("nope"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig("nope"), ConfigError);
}

TEST_CASE("parse, echo, parse is the identity") {
    for (const auto& n : scenario_names()) {
        ExperimentConfig cfg(n);
        cfg.set_seed(12345);
        cfg.set_stream(7);
        cfg.set_output_dir("some/dir");
        const ExperimentConfig back = parse_text(cfg.echo());
        CHECK(back == cfg);
        CHECK(back.echo() == cfg.echo());
    }
}

TEST_CASE("parsing values and lists") {
    const auto cfg = parse_text(
        "[run]\nscenario = blowup\nseed = 9\n\n[params]\nalpha = 0.2\nn_list = 2, 3,4\n");
    CHECK(cfg.seed().seed == 9);
    CHECK(cfg.seed().stream == 0);
    CHECK(cfg.number("alpha") == doctest::Approx(0.2));
    CHECK(cfg.integers("n_list") == std::vector<int>{2, 3, 4});
    CHECK(cfg.number("beta") == doctest::Approx(0.25));  // default kept
    CHECK_THROWS_AS(cfg.integer("alpha"), ConfigError);
}

TEST_CASE("unknown keys and sections are rejected") {
    CHECK_THROWS_AS(parse_text("[run]\nscenario = limit\n[params]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[run]\nscenario = limit\n[extras]\nalpha = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[run]\nscenario = limit\ncolour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[params]\nalpha = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[run]\nscenario = teleport\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[run\nscenario = limit\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[run]\nscenario = limit\nseed = many\n"), ConfigError);

    ExperimentConfig cfg("limit");
    CHECK_THROWS_AS(cfg.set("bogus", "1"), ConfigError);
    CHECK_THROWS_AS(cfg.text("bogus"), ConfigError);
}

TEST_CASE("a key in the wrong section is rejected") {
    const auto& schema = scenario_schema("norms");
    const auto it = std::find_if(schema.begin(), schema.end(), [](const ParamSpec& p) { return p.section == "resolution"; });
    REQUIRE(it != schema.end());
    CHECK_THROWS_AS(parse_text("[run]\nscenario = norms\n[params]\n" + it->key + " = 3\n"), ConfigError);
}

TEST_CASE("set overrides a value and flag parses booleans") {
    ExperimentConfig cfg("crossval");
    const auto& schema = scenario_schema("crossval");
    REQUIRE_FALSE(schema.empty());
    cfg.set(schema.front().key, " 42 ");
    CHECK(cfg.text(schema.front().key) == "42");
    const auto flag = std::find_if(schema.begin(), schema.end(), [&](const ParamSpec& p) {
        return p.default_value == "true" || p.default_value == "false";
    });
    if (flag != schema.end()) {
        cfg.set(flag->key, "yes");
        CHECK(cfg.flag(flag->key));
        cfg.set(flag->key, "maybe");
        CHECK_THROWS_AS(cfg.flag(flag->key), ConfigError);
    }
}

TEST_CASE("load reports missing files") {
    CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/file.ini"), ConfigError);
}
