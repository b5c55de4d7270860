#pragma once

#include <cstdint>
#include <cmath>

namespace gfp {

/// SplitMix64 stream. Single 64-bit seed, deterministic across platforms;
/// every randomized artifact records the seed it was produced from.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1) — never returns 0, safe under log().
    double next_open() {
        double u;
        do { u = next_double(); } while (u == 0.0);
        return u;
    }

    /// Uniform in [lo, hi).
    double next_in(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, m).
    std::uint64_t next_below(std::uint64_t m) {
        return next() % m;
    }

    /// Independent substream for cell `index` of a parallel sweep.
    SplitMix64 fork(std::uint64_t index) const {
        SplitMix64 child(state_ ^ (0x9e3779b97f4a7c15ull * (index + 1)));
        child.next();
        return child;
    }

private:
    std::uint64_t state_;
};

/// Element `index` (0-based) of the van der Corput sequence in `base`.
inline double halton(std::uint64_t index, unsigned base) {
    double f = 1.0, r = 0.0;
    std::uint64_t i = index + 1;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

} // namespace gfp
