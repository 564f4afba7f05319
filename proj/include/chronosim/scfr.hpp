#ifndef CHRONOSIM_SCFR_HPP
#define CHRONOSIM_SCFR_HPP

#include <cstdint>
#include <optional>

#include "chronosim/clock.hpp"
#include "chronosim/errors.hpp"

namespace chronosim {

// Cumulative ratio estimator for asynchronous source clock frequency
// recovery. Holds the first and latest (send, receive) timestamp pair of a
// beacon stream; the estimate is the difference quotient, so any constant
// path delay cancels exactly. Interior observations do not matter.
class RatioEstimator {
  public:
    void observe(const LocalTimestamp& send_ts, const LocalTimestamp& recv_ts) {
        if (count_ >= 1 && !(send_ts.value > last_send_.value)) {
            throw OutOfOrderBeaconError("beacon send timestamps must be "
                                        "strictly increasing");
        }
        if (count_ == 0) {
            first_send_ = send_ts;
            first_recv_ = recv_ts;
        }
        last_send_ = send_ts;
        last_recv_ = recv_ts;
        ++count_;
    }

    // R-hat = (receiver elapsed) / (sender elapsed). Empty before two
    // observations; callers fall back to 1.
    std::optional<double> ratio() const {
        if (count_ < 2) {
            return std::nullopt;
        }
        const double send_span = last_send_.value - first_send_.value;
        if (send_span == 0.0) {
            throw DegenerateSpanError("zero send span in ratio estimator");
        }
        return (last_recv_.value - first_recv_.value) / send_span;
    }

    // Estimate with the warm-up fallback applied: (R-hat, warm). warm is
    // false while the estimator still needs observations.
    struct Estimate {
        double value = 1.0;
        bool warm = false;
    };
    Estimate ratio_or_fallback() const {
        if (auto r = ratio()) {
            return {*r, true};
        }
        return {1.0, false};
    }

    std::uint64_t count() const { return count_; }
    const LocalTimestamp& first_send() const { return first_send_; }
    const LocalTimestamp& first_recv() const { return first_recv_; }
    const LocalTimestamp& last_send() const { return last_send_; }
    const LocalTimestamp& last_recv() const { return last_recv_; }

  private:
    LocalTimestamp first_send_{};
    LocalTimestamp first_recv_{};
    LocalTimestamp last_send_{};
    LocalTimestamp last_recv_{};
    std::uint64_t count_ = 0;
};

}  // namespace chronosim

#endif
