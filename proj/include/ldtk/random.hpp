#pragma once

#include <cstdint>
#include <random>

namespace ldtk {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Stream k of a plan seeded with `seed` starts mt19937_64 from
// splitmix64(seed + 0x9E3779B97F4A7C15 * (k + 1)).
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t k)
{
    return std::mt19937_64(splitmix64(seed + 0x9E3779B97F4A7C15ull * (k + 1)));
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace ldtk
