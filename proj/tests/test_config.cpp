#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vianalab/config.hpp"

using namespace viana;

TEST_CASE("parse sections, comments and values") {
    auto cfg = ExperimentConfig::from_string(
        "# experiment\n"
        "[map]\n"
        "d = 16\n"
        "alpha = 0.05   # coupling\n"
        "[run]\n"
        "seed = 42\n"
        "reproducible = true\n");
    CHECK(cfg.get_int("map", "d", 0) == 16);
    CHECK(cfg.get_double("map", "alpha", 0.0) == 0.05);
    CHECK(cfg.get_int("run", "seed", 0) == 42);
    CHECK(cfg.get_bool("run", "reproducible", false));
    CHECK(cfg.get("map", "a0", "misiurewicz") == "misiurewicz");  // default
    CHECK(!cfg.has("map", "a0"));
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(ExperimentConfig::from_string("[map]\nd = 16\nfoo = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("[nosuch]\nd = 16\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("d = 16\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("[map\nd = 16\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_string("[map]\nd\n"), ConfigError);
}

TEST_CASE("malformed values are rejected on access") {
    auto cfg = ExperimentConfig::from_string("[map]\nd = sixteen\nalpha = 0.x\n");
    CHECK_THROWS_AS(cfg.get_int("map", "d", 0), ConfigError);
    CHECK_THROWS_AS(cfg.get_double("map", "alpha", 0.0), ConfigError);
}

TEST_CASE("map parameter resolution") {
    auto cfg = ExperimentConfig::from_string("[map]\nalpha = 0.01\n");
    MapParams mp = cfg.map_params();
    CHECK(mp.a0 == doctest::Approx(MapParams::misiurewicz_a0()).epsilon(1e-14));
    CHECK(mp.beta == doctest::Approx(MapParams::default_beta(mp.a0, 0.01)).epsilon(1e-14));

    auto num = ExperimentConfig::from_string("[map]\na0 = 1.9\nalpha = 0\nbeta = 1.92\n");
    CHECK(num.map_params().a0 == 1.9);

    auto bad = ExperimentConfig::from_string("[map]\na0 = 2.5\n");
    CHECK_THROWS_AS(bad.map_params(), ConfigError);
    auto bad_beta = ExperimentConfig::from_string("[map]\nbeta = 0.5\n");
    CHECK_THROWS_AS(bad_beta.map_params(), ConfigError);
}

TEST_CASE("integer lists") {
    auto cfg = ExperimentConfig::from_string("[hyptimes]\nhorizons = 100, 1000,10000\n");
    auto v = cfg.get_int_list("hyptimes", "horizons", {});
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 100);
    CHECK(v[2] == 10000);
    auto dflt = cfg.get_int_list("ulam", "n_theta", {7});
    CHECK(dflt == std::vector<std::int64_t>{7});
}

TEST_CASE("audit json carries every key with defaults resolved") {
    auto cfg = ExperimentConfig::from_string("[map]\nalpha = 0.02\n[run]\nseed = 9\n");
    Json j = cfg.to_json();
    CHECK(j["map"]["alpha"] == "0.02");
    CHECK(j["map"]["d"] == "16");
    CHECK(j["run"]["seed"] == "9");
    CHECK(j["ulam"]["n_theta"] == "256");
    CHECK(j["resolved"]["a0"].get<double>() ==
          doctest::Approx(MapParams::misiurewicz_a0()).epsilon(1e-14));
}
