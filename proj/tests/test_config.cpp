#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "chronosim/config.hpp"

using namespace chronosim;

static const char* kReferenceText = R"(
# desk-scale reference scenario
horizon_s = 120
beacon_interval_s = 0.1
n_measurements = 100
seed = 1
processing_delay_a_s = 0

[node head]
ratio = 1.0
offset_s = 0.0

[node gateway]
ratio = 1.0001
offset_s = 1.0

[node sensor]
ratio = 1.0002
offset_s = 0.9

[link head gateway]
distance_m = 100
noise = none

[link gateway sensor]
distance_m = 200
noise = none
)";

TEST_CASE("reference scenario text parses to the built-in defaults") {
    const ScenarioConfig cfg = parse_scenario_string(kReferenceText);
    const ScenarioConfig ref = reference_scenario();
    CHECK(cfg.horizon == ref.horizon);
    CHECK(cfg.beacon_interval == ref.beacon_interval);
    CHECK(cfg.n_measurements == ref.n_measurements);
    REQUIRE(cfg.nodes.size() == 3);
    CHECK(cfg.nodes[1].clock.ratio == 1.0001);
    CHECK(cfg.nodes[2].clock.offset == 0.9);
    REQUIRE(cfg.links.size() == 2);
    CHECK(cfg.links[0].fixed_delay() ==
          Catch::Approx(100.0 / 2.998e8).epsilon(1e-15));
    CHECK(cfg.links[1].fixed_delay() ==
          Catch::Approx(200.0 / 2.998e8).epsilon(1e-15));
    CHECK(cfg.violations().empty());
}

TEST_CASE("unknown keys are rejected with location info") {
    try {
        parse_scenario_string("horizon_s = 120\nbogus_key = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].find("bogus_key") != std::string::npos);
    }
}

TEST_CASE("all violations are reported at once") {
    ScenarioConfig cfg = reference_scenario();
    cfg.horizon = -1.0;
    cfg.beacon_interval = 0.0;
    cfg.nodes[2].clock.ratio = 1.5;  // way outside ppm scale
    const auto v = cfg.violations();
    CHECK(v.size() == 3);
}

TEST_CASE("links must connect consecutive chain nodes") {
    ScenarioConfig cfg = reference_scenario();
    cfg.links[0].to = "sensor";
    CHECK_FALSE(cfg.violations().empty());
}

TEST_CASE("distance and fixed delay are mutually exclusive") {
    ScenarioConfig cfg = reference_scenario();
    cfg.links[0].fixed_delay_s = 1e-6;
    CHECK_FALSE(cfg.violations().empty());
}

TEST_CASE("chain needs at least head and sensor") {
    ScenarioConfig cfg = reference_scenario();
    cfg.nodes.resize(1);
    cfg.links.clear();
    CHECK_FALSE(cfg.violations().empty());
}

TEST_CASE("overrides mirror the file keys") {
    ScenarioConfig cfg = reference_scenario();
    apply_override(cfg, "n_measurements=0");
    CHECK(cfg.n_measurements == 0);
    apply_override(cfg, "beacon_interval_s=0.05");
    CHECK(cfg.beacon_interval == 0.05);
    apply_override(cfg, "node.sensor.offset_s=1.3");
    CHECK(cfg.nodes[2].clock.offset == 1.3);
    apply_override(cfg, "link.gateway.sensor.noise=gaussian");
    CHECK(cfg.links[1].noise.kind == NoiseModel::Kind::Gaussian);
    CHECK_THROWS_AS(apply_override(cfg, "no_such_key=1"), UsageError);
    CHECK_THROWS_AS(apply_override(cfg, "node.nope.ratio=1"), UsageError);
    CHECK_THROWS_AS(apply_override(cfg, "garbage"), UsageError);
}

TEST_CASE("missing scenario file names the path") {
    try {
        load_scenario("/no/such/scenario.cfg");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/no/such/scenario.cfg") !=
              std::string::npos);
    }
}
