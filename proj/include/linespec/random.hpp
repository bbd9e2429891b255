#ifndef LINESPEC_RANDOM_HPP
#define LINESPEC_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace linespec {

using Rng = std::mt19937_64;

/// splitmix64 mixing step; used for deriving child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based child seed from (master, sweep index, trial index).
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t sweep,
                                std::uint64_t trial) {
    return mix64(mix64(mix64(master) ^ sweep) ^ trial);
}

/// Uniform on [0, 1). Implementation-independent bit mapping so seeds
/// reproduce across standard libraries.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1]; safe as a log argument.
inline double uniform01_open(Rng& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal via Box-Muller (cosine branch only, for determinism).
inline double standard_normal(Rng& rng) {
    const double u1 = uniform01_open(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace linespec

#endif
