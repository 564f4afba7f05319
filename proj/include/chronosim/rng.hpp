#ifndef CHRONOSIM_RNG_HPP
#define CHRONOSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace chronosim {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Seedable stream of draws. mt19937_64 output is fully specified by the
// standard; the distributions are hand-rolled so results are identical on
// every platform. Streams derived from the same seed with different ids are
// independent, so toggling one noise source never perturbs another.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t s = seed ^ (0x2545f4914f6cdd1dULL * (stream_id + 1));
        engine_.seed(detail::splitmix64(s));
    }

    // Uniform in (0, 1].
    double uniform01() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double exponential(double mean) { return -mean * std::log(uniform01()); }

    double gaussian(double mean, double sigma) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sigma * spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return mean + sigma * r * std::cos(a);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace chronosim

#endif
