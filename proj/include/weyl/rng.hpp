#pragma once

#include <cstdint>

namespace weyl {

// splitmix64: used both as a stream generator and to derive independent
// per-trial seeds from a master seed.  Fully specified arithmetic, so runs
// are reproducible across platforms.
struct splitmix64 {
    std::uint64_t state;

    explicit splitmix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Standard normal via Box-Muller (fresh pair each call, first kept).
    double normal();
};

inline double splitmix64::normal() {
    // Box-Muller on two fresh uniforms; u clamped away from 0.
    double u = uniform();
    if (u < 0x1.0p-60) u = 0x1.0p-60;
    double v = uniform();
    double r = __builtin_sqrt(-2.0 * __builtin_log(u));
    return r * __builtin_cos(6.283185307179586476925286766559 * v);
}

// Derive the seed of trial t from a master seed in a fixed documented way:
// seed_t = splitmix64(master).skip(t+1).  Distinct trials get decorrelated
// streams and a (spec, seed) pair fully determines every artifact byte.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial) {
    splitmix64 s(master);
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= trial; ++i) out = s.next();
    return out;
}

}  // namespace weyl
