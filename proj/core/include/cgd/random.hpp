#pragma once

#include <cstdint>
#include <random>

namespace cgd {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    return mix_seed(a ^ mix_seed(b));
}

/// Uniform double in [lo, hi). Uses the top 53 bits of the engine output so the
/// sequence is identical across standard library implementations, unlike
/// std::uniform_real_distribution.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

}  // namespace cgd
