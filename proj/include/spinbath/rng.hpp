// rng.hpp: seeded random streams
//
// One 64-bit root seed is split into named, statistically independent streams
// ("couplings-sys", "couplings-env", "couplings-int", "state-sys", "state-env").
// Each stream is a std::mt19937_64 seeded with splitmix64(root ^ fnv1a(name)).
// Uniform and normal variates are produced by explicit transforms of the raw
// 64-bit output (not std::*_distribution), so sequences are identical across
// standard libraries, platforms and thread counts.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spinbath {

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view s) noexcept;

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    // Independent stream derived from a root seed and a stream name.
    static RngStream derive(std::uint64_t root, std::string_view name);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    // Uniform in [0, 1) with 53 random bits.
    double uniform();
    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Standard normal via Box-Muller; the second variate is cached.
    double normal();
    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

// Named stream identifiers used across the library.
namespace streams {
inline constexpr std::string_view couplings_sys = "couplings-sys";
inline constexpr std::string_view couplings_env = "couplings-env";
inline constexpr std::string_view couplings_int = "couplings-int";
inline constexpr std::string_view state_sys = "state-sys";
inline constexpr std::string_view state_env = "state-env";
} // namespace streams

} // namespace spinbath
