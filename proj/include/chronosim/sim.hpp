#ifndef CHRONOSIM_SIM_HPP
#define CHRONOSIM_SIM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "chronosim/clock.hpp"
#include "chronosim/config.hpp"
#include "chronosim/errors.hpp"
#include "chronosim/protocol.hpp"
#include "chronosim/rng.hpp"

namespace chronosim {

// One noise draw from the link's model. Gaussian draws are redrawn until
// non-negative (truncation at zero).
inline double link_noise(const NoiseModel& noise, RandomStream& rng) {
    switch (noise.kind) {
        case NoiseModel::Kind::None:
            return 0.0;
        case NoiseModel::Kind::Gaussian: {
            double d;
            do {
                d = rng.gaussian(0.0, noise.param);
            } while (d < 0.0);
            return d;
        }
        case NoiseModel::Kind::Exponential:
            return rng.exponential(noise.param);
    }
    return 0.0;
}

// Total one-way delay: fixed part plus one noise draw.
inline double link_delay(const LinkSpec& link, RandomStream& rng) {
    return link.fixed_delay() + link_noise(link.noise, rng);
}

// Poisson measurement traffic: i.i.d. exponential inter-arrivals with mean
// horizon/n, accumulated. Times past the horizon are kept; their reports
// simply never get delivered within the run.
inline std::vector<SimTime> generate_measurement_times(std::uint64_t seed,
                                                       double horizon,
                                                       std::uint64_t n) {
    if (n > 0 && !(horizon > 0.0)) {
        throw ConfigError({"horizon_s must be > 0 to generate measurements"});
    }
    std::vector<SimTime> times;
    times.reserve(n);
    RandomStream rng(seed, 0);
    const double mean = n > 0 ? horizon / static_cast<double>(n) : 0.0;
    double t = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        t += rng.exponential(mean);
        times.push_back(t);
    }
    return times;
}

// Per-hop estimate attached to a delivered report; hop 0 is the sensor's
// uplink, the last hop ends at the head.
struct HopEstimate {
    double theta_est = 0.0;
    double delay_est = 0.0;
    double r_hat = 1.0;
    bool warm = false;
};

struct ReportRecord {
    std::uint64_t measurement_id = 0;
    SimTime t_m = 0.0;
    bool warm_up = false;  // true if any hop used the R-hat = 1 fallback
    std::vector<HopEstimate> hops;
    double t_scfr_once = 0.0;   // measurement time on the first relay clock
    double t_scfr_twice = 0.0;  // recovered measurement time at the head
    double err_once = 0.0;      // vs the measurement instant on that relay
    double err_twice = 0.0;     // vs t_m on the head clock
};

// R-hat sampled at each beacon arrival.
struct RatioSample {
    std::string hop;  // "<receiver>-<sender>"
    std::uint64_t seq = 0;
    SimTime at = 0.0;
    double r_hat = 1.0;
    bool warm = false;
};

struct RunResult {
    std::vector<ReportRecord> records;  // delivered reports, arrival order
    std::vector<RatioSample> series;
    std::vector<SimTime> measurement_times;
    std::uint64_t delivered = 0;
    std::uint64_t undelivered = 0;
};

namespace detail {

struct BeaconEmitEvent {
    std::size_t node;  // emitter index in the chain
    std::uint64_t number;
};
struct BeaconArrivalEvent {
    std::size_t node;  // receiver index
    Beacon beacon;
    LocalTimestamp arrival_ts;
};
struct MeasurementEvent {
    std::uint64_t id;
    SimTime t_m;
};
struct ReportArrivalEvent {
    std::size_t node;  // receiver index
    ReportEnvelope env;
    LocalTimestamp arrival_ts;
};

using EventPayload = std::variant<BeaconArrivalEvent, ReportArrivalEvent,
                                  BeaconEmitEvent, MeasurementEvent>;

struct Event {
    SimTime due;
    int priority;  // arrivals before emissions at equal times
    std::uint64_t insertion;
    EventPayload payload;
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const {
        if (a.due != b.due) {
            return a.due > b.due;
        }
        if (a.priority != b.priority) {
            return a.priority > b.priority;
        }
        return a.insertion > b.insertion;
    }
};

}  // namespace detail

// Deterministic single-threaded event loop over the configured chain. Each
// non-leaf node runs an independent beacon timer on its own clock; every
// measurement traverses sensor -> gateways -> head.
class Simulation {
  public:
    explicit Simulation(const ScenarioConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
    }

    RunResult run() {
        const std::size_t n_nodes = cfg_.nodes.size();
        const std::size_t sensor_idx = n_nodes - 1;

        head_ = HeadNode(0);
        gateways_.clear();
        for (std::size_t i = 1; i + 1 < n_nodes; ++i) {
            gateways_.emplace_back(static_cast<NodeId>(i),
                                   GatewayConfig{cfg_.processing_delay_a});
        }
        sensor_ = SensorNode(static_cast<NodeId>(sensor_idx));

        link_rngs_.clear();
        for (std::size_t i = 0; i < cfg_.links.size(); ++i) {
            link_rngs_.emplace_back(cfg_.seed, i + 1);
        }

        RunResult result;
        result.measurement_times = generate_measurement_times(
            cfg_.seed, cfg_.horizon, cfg_.n_measurements);

        while (!queue_.empty()) {
            queue_.pop();
        }
        insertion_ = 0;

        for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
            push(0.0, kEmitPriority,
                 detail::BeaconEmitEvent{i, 0});
        }
        for (std::uint64_t id = 0; id < result.measurement_times.size();
             ++id) {
            push(result.measurement_times[id], kEmitPriority,
                 detail::MeasurementEvent{id, result.measurement_times[id]});
        }

        partials_.clear();
        while (!queue_.empty()) {
            const detail::Event ev = queue_.top();
            if (ev.due > cfg_.horizon) {
                break;
            }
            queue_.pop();
            std::visit([&](const auto& p) { handle(p, ev.due, result); },
                       ev.payload);
        }

        result.delivered = result.records.size();
        result.undelivered = cfg_.n_measurements - result.delivered;
        return result;
    }

  private:
    static constexpr int kArrivalPriority = 0;
    static constexpr int kEmitPriority = 1;

    void push(SimTime due, int priority, detail::EventPayload payload) {
        queue_.push(detail::Event{due, priority, insertion_++,
                                  std::move(payload)});
    }

    const ClockParams& clock_of(std::size_t idx) const {
        return cfg_.nodes[idx].clock;
    }

    // Message departing node `from` toward `to` (adjacent): schedules the
    // arrival and returns nothing. The arrival timestamp follows the model
    // local_time(departure_ref + D) + d, noise added after clock scaling.
    template <typename MakeEvent>
    void send(std::size_t from, std::size_t to, SimTime departure_ref,
              MakeEvent&& make_event) {
        const std::size_t link_idx = from < to ? from : to;
        const LinkSpec& link = cfg_.links[link_idx];
        const double fixed = link.fixed_delay();
        const double noise = link_noise(link.noise, link_rngs_[link_idx]);
        const SimTime due = departure_ref + fixed + noise;
        LocalTimestamp arrival_ts =
            local_time(clock_of(to), departure_ref + fixed,
                       static_cast<NodeId>(to));
        arrival_ts.value += noise;
        push(due, kArrivalPriority, make_event(arrival_ts));
    }

    void handle(const detail::BeaconEmitEvent& ev, SimTime /*now*/,
                RunResult& /*result*/) {
        const ClockParams& clk = clock_of(ev.node);
        // Beacons are scheduled on the emitter's clock: number k departs at
        // local time offset + k * interval exactly.
        const double dep_local =
            clk.offset + static_cast<double>(ev.number) * cfg_.beacon_interval;
        const SimTime dep_ref =
            static_cast<double>(ev.number) * cfg_.beacon_interval / clk.ratio;
        const LocalTimestamp dep_ts{dep_local, static_cast<NodeId>(ev.node)};
        Beacon beacon = ev.node == 0
                            ? head_.make_beacon(dep_ts)
                            : gateways_[ev.node - 1].make_beacon(dep_ts);
        send(ev.node, ev.node + 1, dep_ref,
             [&](const LocalTimestamp& arrival_ts) {
                 return detail::BeaconArrivalEvent{ev.node + 1, beacon,
                                                   arrival_ts};
             });
        const SimTime next_ref = static_cast<double>(ev.number + 1) *
                                 cfg_.beacon_interval / clk.ratio;
        push(next_ref, kEmitPriority,
             detail::BeaconEmitEvent{ev.node, ev.number + 1});
    }

    void handle(const detail::BeaconArrivalEvent& ev, SimTime now,
                RunResult& result) {
        const BeaconReceiver* receiver = nullptr;
        if (ev.node == cfg_.nodes.size() - 1) {
            sensor_.on_beacon(ev.beacon, ev.arrival_ts);
            receiver = &sensor_.receiver();
        } else {
            gateways_[ev.node - 1].on_beacon(ev.beacon, ev.arrival_ts);
            receiver = &gateways_[ev.node - 1].receiver();
        }
        const auto est = receiver->estimator().ratio_or_fallback();
        result.series.push_back(RatioSample{
            cfg_.nodes[ev.node].name + "-" + cfg_.nodes[ev.node - 1].name,
            ev.beacon.seq, now, est.value, est.warm});
    }

    void handle(const detail::MeasurementEvent& ev, SimTime /*now*/,
                RunResult& /*result*/) {
        // Measurement and report transmission coincide at the sensor.
        if (!sensor_.receiver().synchronized()) {
            return;  // counted as undelivered at the end of the run
        }
        const std::size_t sensor_idx = cfg_.nodes.size() - 1;
        const LocalTimestamp raw = local_time(
            clock_of(sensor_idx), ev.t_m, static_cast<NodeId>(sensor_idx));
        ReportEnvelope env = sensor_.make_report(raw, ev.id, ev.t_m);
        send(sensor_idx, sensor_idx - 1, ev.t_m,
             [&](const LocalTimestamp& arrival_ts) {
                 return detail::ReportArrivalEvent{sensor_idx - 1, env,
                                                   arrival_ts};
             });
    }

    void handle(const detail::ReportArrivalEvent& ev, SimTime now,
                RunResult& result) {
        if (ev.node == 0) {
            deliver_to_head(ev, result);
            return;
        }
        GatewayNode& gw = gateways_[ev.node - 1];
        auto [est, translated] = gw.on_report(ev.env, ev.arrival_ts);
        Partial& partial = partials_[ev.env.measurement_id];
        partial.hops.push_back(HopEstimate{est.theta_est, est.delay_est,
                                           est.ratio_used, est.warm});
        if (!partial.once) {
            partial.once = translated.value;
            partial.once_node = ev.node;
        }
        ReportEnvelope out = gw.forward_report(ev.env, ev.arrival_ts,
                                               translated);
        // The retransmission leaves processing_delay_a seconds of gateway
        // clock time after the arrival.
        const SimTime dep_ref =
            now + cfg_.processing_delay_a / clock_of(ev.node).ratio;
        send(ev.node, ev.node - 1, dep_ref,
             [&](const LocalTimestamp& arrival_ts) {
                 return detail::ReportArrivalEvent{ev.node - 1, out,
                                                   arrival_ts};
             });
    }

    void deliver_to_head(const detail::ReportArrivalEvent& ev,
                         RunResult& result) {
        const bool multi_hop = !gateways_.empty();
        auto [est, recovered] = head_.on_report(ev.env, ev.arrival_ts,
                                                multi_hop);
        ReportRecord rec;
        rec.measurement_id = ev.env.measurement_id;
        rec.t_m = ev.env.true_measurement_time;

        auto it = partials_.find(ev.env.measurement_id);
        std::size_t once_node = 0;
        std::optional<double> once;
        if (it != partials_.end()) {
            rec.hops = std::move(it->second.hops);
            once = it->second.once;
            once_node = it->second.once_node;
            partials_.erase(it);
        }
        rec.hops.push_back(HopEstimate{est.theta_est, est.delay_est,
                                       est.ratio_used, est.warm});
        rec.t_scfr_twice = recovered.value;
        rec.t_scfr_once = once ? *once : recovered.value;
        const ClockParams& head_clk = clock_of(0);
        rec.err_twice =
            rec.t_scfr_twice - local_time(head_clk, rec.t_m).value;
        const ClockParams& once_clk = once ? clock_of(once_node) : head_clk;
        rec.err_once = rec.t_scfr_once - local_time(once_clk, rec.t_m).value;
        rec.warm_up = false;
        for (const auto& h : rec.hops) {
            if (!h.warm) {
                rec.warm_up = true;
            }
        }
        result.records.push_back(std::move(rec));
    }

    struct Partial {
        std::vector<HopEstimate> hops;
        std::optional<double> once;
        std::size_t once_node = 0;
    };

    ScenarioConfig cfg_;
    HeadNode head_{0};
    std::vector<GatewayNode> gateways_;
    SensorNode sensor_{0};
    std::vector<RandomStream> link_rngs_;
    std::priority_queue<detail::Event, std::vector<detail::Event>,
                        detail::EventLater>
        queue_;
    std::uint64_t insertion_ = 0;
    std::map<std::uint64_t, Partial> partials_;
};

inline RunResult run(const ScenarioConfig& cfg) {
    return Simulation(cfg).run();
}

}  // namespace chronosim

#endif
