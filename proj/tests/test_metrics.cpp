#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "chronosim/metrics.hpp"
#include "chronosim/rng.hpp"

using namespace chronosim;

TEST_CASE("mse basics") {
    const std::vector<double> zero{0.0, 0.0, 0.0};
    CHECK(mse(zero) == 0.0);
    const std::vector<double> pair{1e-3, -1e-3};
    CHECK(mse(pair) == Catch::Approx(1e-6).epsilon(1e-15));
    const std::vector<double> one{2.0};
    CHECK(mse(one) == 4.0);
    CHECK_THROWS_AS(mse(std::vector<double>{}), EmptySeriesError);
}

TEST_CASE("mse scaling law and permutation invariance") {
    RandomStream rng(31, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform01() * 20);
        std::vector<double> xs(n);
        for (auto& x : xs) {
            x = (rng.uniform01() - 0.5) * 2.0;
        }
        const double c = (rng.uniform01() - 0.5) * 10.0;
        std::vector<double> scaled = xs;
        for (auto& x : scaled) {
            x *= c;
        }
        CHECK(mse(scaled) ==
              Catch::Approx(c * c * mse(xs)).epsilon(1e-12).margin(1e-300));

        std::vector<double> flipped = xs;
        for (auto& x : flipped) {
            x = -x;
        }
        CHECK(mse(flipped) == Catch::Approx(mse(xs)).epsilon(1e-15));

        std::vector<double> shuffled = xs;
        // Deterministic Fisher-Yates over the stream.
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform01() * (i + 1));
            std::swap(shuffled[i], shuffled[std::min(j, i)]);
        }
        CHECK(mse(shuffled) == Catch::Approx(mse(xs)).epsilon(1e-12));
    }
}

TEST_CASE("frequency difference against the true per-hop ratio") {
    const ClockParams head{1.0, 0.0};
    const ClockParams gw{1.0001, 1.0};
    const ClockParams sensor{1.0002, 0.9};
    CHECK(frequency_difference(gw.ratio / head.ratio, gw, head) == 0.0);
    CHECK(frequency_difference(1.0, gw, head) ==
          Catch::Approx(-1.0e-4).epsilon(1e-9));
    // Zero-noise CRE over the sensor hop returns exactly R_HS / R_HG.
    CHECK(frequency_difference(sensor.ratio / gw.ratio, sensor, gw) == 0.0);
}

TEST_CASE("measurement time differences of an identity run are zero") {
    ScenarioConfig cfg = reference_scenario();
    for (auto& n : cfg.nodes) {
        n.clock = ClockParams{1.0, 0.0};
    }
    for (auto& l : cfg.links) {
        l.distance_m.reset();
        l.fixed_delay_s = 0.0;
    }
    const RunResult r = run(cfg);
    REQUIRE_FALSE(r.records.empty());
    for (const auto& rec : r.records) {
        const auto d = measurement_time_difference(rec, cfg.nodes[1].clock,
                                                   cfg.nodes[0].clock);
        CHECK(std::abs(d.sensor_hop) <= 1e-9);
        CHECK(std::abs(d.end_to_end) <= 1e-9);
    }
    const RunSummary s = summarize(r, cfg);
    CHECK(s.end_to_end.mse <= 1e-18);
    CHECK(s.sensor_hop.mse <= 1e-18);
}

TEST_CASE("reference run: warm end-to-end errors within the derived bound") {
    const ScenarioConfig cfg = reference_scenario();
    const RunResult r = run(cfg);
    const RunSummary s = summarize(r, cfg);
    CHECK(s.end_to_end.n + s.warm_up_excluded == r.delivered);
    CHECK(std::abs(s.end_to_end.min) <= 1e-4);
    CHECK(std::abs(s.end_to_end.max) <= 1e-4);
    CHECK(s.end_to_end.mse <= 1e-8);
}

TEST_CASE("summarize can include warm-up records") {
    const ScenarioConfig cfg = reference_scenario();
    const RunResult r = run(cfg);
    const RunSummary all = summarize(r, cfg, true);
    CHECK(all.warm_up_excluded == 0);
    CHECK(all.end_to_end.n == r.delivered);
}
