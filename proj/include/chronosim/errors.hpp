#ifndef CHRONOSIM_ERRORS_HPP
#define CHRONOSIM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace chronosim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A clock with non-positive frequency ratio cannot be inverted.
struct InvalidClockError : Error {
    using Error::Error;
};

// Beacon send timestamps must be strictly increasing; a violation means the
// harness fed observations out of order (no reordering channel is modeled).
struct OutOfOrderBeaconError : Error {
    using Error::Error;
};

struct DegenerateSpanError : Error {
    using Error::Error;
};

// A node was asked to act before it received the beacon it depends on.
struct NotSynchronizedError : Error {
    using Error::Error;
};

// An envelope referenced a beacon the receiver never sent, or is missing a
// field the receiving role requires.
struct ProtocolViolationError : Error {
    using Error::Error;
};

struct EmptySeriesError : Error {
    using Error::Error;
};

// Invalid scenario: carries every violation found, not just the first.
struct ConfigError : Error {
    explicit ConfigError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& s : v) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }
    std::vector<std::string> violations_;
};

struct UsageError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace chronosim

#endif
