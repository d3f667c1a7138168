#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace pmots {

using Rng = std::mt19937_64;

/// Independent stream for (seed, stream). Paths, chunks and initial-front
/// construction each draw from their own stream so results do not depend on
/// scheduling order.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x504d4f54u};
    return Rng(seq);
}

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
    return std::generate_canonical<double, 53>(rng);
}

inline bool bernoulli(Rng& rng, double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform01(rng) < p;
}

std::string save_rng(const Rng& rng);
Rng load_rng(const std::string& state);

}  // namespace pmots
