#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "rankfd/distributions.hpp"

namespace rankfd {

/// SplitMix64 finalizer; the building block for deriving seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for a sub-stream (bootstrap replicate, simulation run, grid cell).
/// Streams are identified by index, never by execution order, so results do
/// not depend on thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream));
}

/// FNV-1a, used to turn a cell descriptor string into a stream id.
inline std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Deterministic random stream. Draws are produced by explicit bit
/// manipulation and inverse-CDF transforms so that a given seed yields the
/// same sequence on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform on (0, 1); endpoints are never returned.
    double u01() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53; }

    double normal() { return normal_quantile(u01()); }

    /// Rademacher sign: -1 or +1 with probability 1/2 each.
    double rademacher() { return (eng_() >> 63) ? 1.0 : -1.0; }

private:
    std::mt19937_64 eng_;
};

}  // namespace rankfd
