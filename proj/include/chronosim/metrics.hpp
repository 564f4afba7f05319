#ifndef CHRONOSIM_METRICS_HPP
#define CHRONOSIM_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "chronosim/clock.hpp"
#include "chronosim/errors.hpp"
#include "chronosim/sim.hpp"

namespace chronosim {

struct SeriesPoint {
    SimTime at = 0.0;
    double value = 0.0;
    std::string hop;
};

// Estimation error of the per-hop frequency ratio: R-hat minus the true
// child-over-parent ratio.
inline double frequency_difference(double r_hat, const ClockParams& child,
                                   const ClockParams& parent) {
    return r_hat - child.ratio / parent.ratio;
}

struct TimeDifference {
    double sensor_hop = 0.0;   // first-relay translation vs the measurement
                               // instant on that relay's clock
    double end_to_end = 0.0;   // recovered time vs t_m on the head clock
    double gateway_hop = 0.0;  // end-to-end error minus the sensor-hop error
                               // re-expressed in head-clock seconds
};

// Signed measurement-time differences of a delivered report against the
// true clocks.
inline TimeDifference measurement_time_difference(const ReportRecord& rec,
                                                  const ClockParams& relay,
                                                  const ClockParams& head) {
    TimeDifference d;
    d.sensor_hop = rec.t_scfr_once - local_time(relay, rec.t_m).value;
    d.end_to_end = rec.t_scfr_twice - local_time(head, rec.t_m).value;
    d.gateway_hop =
        d.end_to_end - d.sensor_hop * head.ratio / relay.ratio;
    return d;
}

inline double mse(std::span<const double> series) {
    if (series.empty()) {
        throw EmptySeriesError("mse of an empty series");
    }
    double acc = 0.0;
    for (double v : series) {
        acc += v * v;
    }
    return acc / static_cast<double>(series.size());
}

struct HopSummary {
    std::string hop;
    std::uint64_t n = 0;
    double mse = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct RunSummary {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t undelivered = 0;
    std::uint64_t warm_up_excluded = 0;
    HopSummary sensor_hop;
    HopSummary gateway_hop;
    HopSummary end_to_end;
};

// MSE and extrema over delivered reports. Warm-up records are excluded
// unless include_warm_up is set.
inline RunSummary summarize(const RunResult& result,
                            const ScenarioConfig& cfg,
                            bool include_warm_up = false) {
    RunSummary s;
    s.generated = cfg.n_measurements;
    s.delivered = result.delivered;
    s.undelivered = result.undelivered;

    // The first relay above the sensor is the next-to-last chain node (the
    // head itself in the direct sensor->head case).
    const ClockParams& relay = cfg.nodes[cfg.nodes.size() - 2].clock;
    const ClockParams& head = cfg.nodes.front().clock;

    std::vector<double> once;
    std::vector<double> gw;
    std::vector<double> twice;
    for (const auto& rec : result.records) {
        if (rec.warm_up && !include_warm_up) {
            ++s.warm_up_excluded;
            continue;
        }
        const TimeDifference d = measurement_time_difference(rec, relay, head);
        once.push_back(d.sensor_hop);
        gw.push_back(d.gateway_hop);
        twice.push_back(d.end_to_end);
    }
    auto fill = [](HopSummary& h, const std::vector<double>& xs,
                   const std::string& hop) {
        h.hop = hop;
        h.n = xs.size();
        if (xs.empty()) {
            return;
        }
        h.mse = mse(xs);
        h.min = *std::min_element(xs.begin(), xs.end());
        h.max = *std::max_element(xs.begin(), xs.end());
    };
    fill(s.sensor_hop, once, "sensor-hop");
    fill(s.gateway_hop, gw, "gateway-hop");
    fill(s.end_to_end, twice, "end-to-end");
    return s;
}

}  // namespace chronosim

#endif
