#ifndef CHRONOSIM_CLOCK_HPP
#define CHRONOSIM_CLOCK_HPP

#include <cmath>
#include <cstdint>
#include <limits>

#include "chronosim/errors.hpp"

namespace chronosim {

// Seconds on the head-node reference timeline.
using SimTime = double;

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// A reading of one specific node's clock, in seconds. The node id is carried
// for bookkeeping and test-time misuse detection; arithmetic on the value is
// ordinary real arithmetic. Two-way formulas deliberately mix timestamps
// from different clocks, so no cross-node check is enforced here.
struct LocalTimestamp {
    double value = 0.0;
    NodeId node_id = kNoNode;

    friend bool operator==(const LocalTimestamp& a, const LocalTimestamp& b) {
        return a.value == b.value && a.node_id == b.node_id;
    }
};

inline double delta(const LocalTimestamp& a, const LocalTimestamp& b) {
    return a.value - b.value;
}

// Affine clock model: local = reference * ratio + offset. ratio is the node
// frequency over the head frequency, offset the reading at reference zero.
struct ClockParams {
    double ratio = 1.0;   // R, dimensionless, > 0
    double offset = 0.0;  // theta, seconds

    bool valid() const {
        return std::isfinite(ratio) && std::isfinite(offset) && ratio > 0.0;
    }

    // ppm-scale skews only; anything wider is a configuration error.
    bool plausible() const {
        return valid() && ratio >= 1.0 - 1e-2 && ratio <= 1.0 + 1e-2;
    }
};

inline LocalTimestamp local_time(const ClockParams& params, SimTime t,
                                 NodeId node = kNoNode) {
    return LocalTimestamp{t * params.ratio + params.offset, node};
}

inline SimTime to_reference(const ClockParams& params,
                            const LocalTimestamp& ts) {
    if (!(params.ratio > 0.0)) {
        throw InvalidClockError("clock ratio must be > 0");
    }
    return (ts.value - params.offset) / params.ratio;
}

}  // namespace chronosim

#endif
