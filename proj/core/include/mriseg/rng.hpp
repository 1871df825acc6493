#ifndef MRISEG_RNG_HPP
#define MRISEG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mriseg {

/// Seeded random source with a fixed draw scheme.
///
/// std::mt19937_64 supplies the bits, but the uniform/normal draws are
/// defined here rather than through std distributions, whose output streams
/// are implementation-defined. Every artifact output derived from a seed is
/// byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0,1) with 53 bits of precision.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo,hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Gaussian via Box-Muller; the paired draw is cached.
    double normal(double mean, double stddev) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        const double u1 = 1.0 - uniform();  // (0,1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return mean + stddev * r * std::cos(theta);
    }

    /// Uniform integer in [0,n); n must be positive.
    std::uint64_t next_below(std::uint64_t n) { return engine_() % n; }

    /// Derives a stream-specific seed (splitmix64 finalizer).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mriseg

#endif
