#ifndef CHRONOSIM_PROTOCOL_HPP
#define CHRONOSIM_PROTOCOL_HPP

#include <cstdint>
#include <optional>

#include "chronosim/clock.hpp"
#include "chronosim/errors.hpp"
#include "chronosim/scfr.hpp"

namespace chronosim {

// Periodic downlink message carrying the sender's departure timestamp.
struct Beacon {
    NodeId sender_id = kNoNode;
    LocalTimestamp departure_ts;
    std::uint64_t seq = 0;
};

// The one beacon a receiver retains: the most recent.
struct BeaconRecord {
    LocalTimestamp departure_ts;
    LocalTimestamp arrival_ts;
    std::uint64_t seq = 0;
};

// Measurement report as it travels sensor -> gateway(s) -> head. Each hop's
// sender echoes the latest beacon it received from the hop's receiver, which
// turns the report into the response half of a reverse two-way exchange.
struct ReportEnvelope {
    std::uint64_t measurement_id = 0;
    // Simulation bookkeeping only; protocol logic never reads it.
    SimTime true_measurement_time = 0.0;

    std::uint64_t echo_seq = 0;
    LocalTimestamp echo_departure_ts;
    LocalTimestamp echo_arrival_ts;

    LocalTimestamp report_departure_ts;
    // Frequency-ratio estimate the sender applied when forming
    // report_departure_ts; the receiver reuses it to rate-translate an
    // embedded measurement timestamp. 1.0 with warm=false during warm-up.
    double report_ratio = 1.0;
    bool report_ratio_warm = false;

    // Measurement time on the previous relay's clock; absent on the
    // sensor hop, whose departure timestamp is already rate-translated.
    std::optional<LocalTimestamp> translated_measurement_ts;
};

// Result of one reverse two-way exchange: offset and one-way delay of the
// reporting node relative to the receiver, plus the ratio used to translate
// the measurement timestamp onto the receiver's clock.
struct SyncEstimate {
    double theta_est = 0.0;
    double delay_est = 0.0;
    double ratio_used = 1.0;
    bool warm = false;
};

struct GatewayConfig {
    double processing_delay_a = 0.0;  // seconds of the gateway's own clock
};

// Downlink listener state: latest beacon record plus the cumulative ratio
// estimator over the beacon stream.
class BeaconReceiver {
  public:
    void on_beacon(const Beacon& beacon, const LocalTimestamp& arrival_ts) {
        if (have_seq_ && beacon.seq <= last_seq_) {
            throw OutOfOrderBeaconError("stale beacon sequence number");
        }
        estimator_.observe(beacon.departure_ts, arrival_ts);
        record_ = BeaconRecord{beacon.departure_ts, arrival_ts, beacon.seq};
        last_seq_ = beacon.seq;
        have_seq_ = true;
    }

    bool synchronized() const { return record_.has_value(); }
    const BeaconRecord& record() const {
        if (!record_) {
            throw NotSynchronizedError("no beacon received yet");
        }
        return *record_;
    }
    const RatioEstimator& estimator() const { return estimator_; }

  private:
    std::optional<BeaconRecord> record_;
    RatioEstimator estimator_;
    std::uint64_t last_seq_ = 0;
    bool have_seq_ = false;
};

// Beacon emission bookkeeping; sequence numbers are dense from 0.
class BeaconSender {
  public:
    explicit BeaconSender(NodeId id = kNoNode) : id_(id) {}

    Beacon make_beacon(const LocalTimestamp& departure_ts) {
        return Beacon{id_, departure_ts, next_seq_++};
    }
    bool knows_seq(std::uint64_t seq) const { return seq < next_seq_; }
    NodeId id() const { return id_; }

  private:
    NodeId id_;
    std::uint64_t next_seq_ = 0;
};

namespace detail {

// Shared receive-side math for gateways and the head. The echoed beacon plus
// the report's departure/arrival timestamps form the two-way exchange; an
// embedded translated timestamp, when present, is re-expressed on this
// node's clock using the ratio carried in the envelope.
inline std::pair<SyncEstimate, LocalTimestamp> receive_and_translate(
    const BeaconSender& sender, const ReportEnvelope& env,
    const LocalTimestamp& arrival_ts, NodeId self) {
    if (!sender.knows_seq(env.echo_seq)) {
        throw ProtocolViolationError("report echoes an unknown beacon");
    }
    const double downlink = delta(env.echo_arrival_ts, env.echo_departure_ts);
    const double uplink = delta(arrival_ts, env.report_departure_ts);
    SyncEstimate est;
    est.theta_est = (downlink - uplink) / 2.0;
    est.delay_est = (downlink + uplink) / 2.0;
    est.ratio_used = env.report_ratio;
    est.warm = env.report_ratio_warm;

    LocalTimestamp translated;
    if (env.translated_measurement_ts) {
        const LocalTimestamp& m = *env.translated_measurement_ts;
        translated.value = delta(m, env.echo_arrival_ts) / env.report_ratio +
                           env.echo_arrival_ts.value - est.theta_est;
    } else {
        // Sensor hop: the departure timestamp is already rate-translated,
        // only the offset remains.
        translated.value = env.report_departure_ts.value - est.theta_est;
    }
    translated.node_id = self;
    return {est, translated};
}

}  // namespace detail

// Leaf node: listens to its parent's beacons and emits measurement reports.
class SensorNode {
  public:
    explicit SensorNode(NodeId id = kNoNode) : id_(id) {}

    void on_beacon(const Beacon& beacon, const LocalTimestamp& arrival_ts) {
        receiver_.on_beacon(beacon, arrival_ts);
    }

    // Builds the report for a measurement taken at raw_measurement_ts on the
    // sensor clock; measurement and transmission coincide. The departure
    // timestamp is translated onto the parent's clock rate via the CRE.
    ReportEnvelope make_report(const LocalTimestamp& raw_measurement_ts,
                               std::uint64_t measurement_id,
                               SimTime true_measurement_time) const {
        const BeaconRecord& rec = receiver_.record();
        const auto est = receiver_.estimator().ratio_or_fallback();
        ReportEnvelope env;
        env.measurement_id = measurement_id;
        env.true_measurement_time = true_measurement_time;
        env.echo_seq = rec.seq;
        env.echo_departure_ts = rec.departure_ts;
        env.echo_arrival_ts = rec.arrival_ts;
        env.report_departure_ts = LocalTimestamp{
            delta(raw_measurement_ts, rec.arrival_ts) / est.value +
                rec.arrival_ts.value,
            id_};
        env.report_ratio = est.value;
        env.report_ratio_warm = est.warm;
        return env;
    }

    const BeaconReceiver& receiver() const { return receiver_; }
    NodeId id() const { return id_; }

  private:
    NodeId id_;
    BeaconReceiver receiver_;
};

// Intermediate relay: a head to its child, a sensor to its parent.
class GatewayNode {
  public:
    GatewayNode(NodeId id, GatewayConfig cfg)
        : id_(id), cfg_(cfg), sender_(id) {}

    void on_beacon(const Beacon& beacon, const LocalTimestamp& arrival_ts) {
        receiver_.on_beacon(beacon, arrival_ts);
    }
    Beacon make_beacon(const LocalTimestamp& departure_ts) {
        return sender_.make_beacon(departure_ts);
    }

    // Two-way estimate against the reporting child plus the measurement time
    // re-expressed on this gateway's clock.
    std::pair<SyncEstimate, LocalTimestamp> on_report(
        const ReportEnvelope& env, const LocalTimestamp& arrival_ts) const {
        return detail::receive_and_translate(sender_, env, arrival_ts, id_);
    }

    // Builds the upstream envelope. The departure timestamp maps the local
    // arrival plus processing delay onto the parent's clock rate, anchored
    // at the latest beacon arrival. The physical retransmission happens
    // processing_delay_a seconds of gateway time after arrival.
    ReportEnvelope forward_report(const ReportEnvelope& env,
                                  const LocalTimestamp& arrival_ts,
                                  const LocalTimestamp& translated) const {
        const BeaconRecord& rec = receiver_.record();
        const auto est = receiver_.estimator().ratio_or_fallback();
        ReportEnvelope out;
        out.measurement_id = env.measurement_id;
        out.true_measurement_time = env.true_measurement_time;
        out.echo_seq = rec.seq;
        out.echo_departure_ts = rec.departure_ts;
        out.echo_arrival_ts = rec.arrival_ts;
        out.report_departure_ts = LocalTimestamp{
            (arrival_ts.value + cfg_.processing_delay_a -
             rec.arrival_ts.value) /
                    est.value +
                rec.arrival_ts.value,
            id_};
        out.report_ratio = est.value;
        out.report_ratio_warm = est.warm;
        out.translated_measurement_ts = translated;
        return out;
    }

    const BeaconReceiver& receiver() const { return receiver_; }
    const GatewayConfig& config() const { return cfg_; }
    NodeId id() const { return id_; }

  private:
    NodeId id_;
    GatewayConfig cfg_;
    BeaconReceiver receiver_;
    BeaconSender sender_;
};

// Root of the chain; its clock is the reference the whole run reports in.
class HeadNode {
  public:
    explicit HeadNode(NodeId id = 0) : id_(id), sender_(id) {}

    Beacon make_beacon(const LocalTimestamp& departure_ts) {
        return sender_.make_beacon(departure_ts);
    }

    // require_translated distinguishes a multi-hop chain (relays must embed
    // the translated measurement time) from the direct sensor->head case.
    std::pair<SyncEstimate, LocalTimestamp> on_report(
        const ReportEnvelope& env, const LocalTimestamp& arrival_ts,
        bool require_translated) const {
        if (require_translated && !env.translated_measurement_ts) {
            throw ProtocolViolationError(
                "relayed report lacks translated measurement timestamp");
        }
        return detail::receive_and_translate(sender_, env, arrival_ts, id_);
    }

    NodeId id() const { return id_; }

  private:
    NodeId id_;
    BeaconSender sender_;
};

}  // namespace chronosim

#endif
