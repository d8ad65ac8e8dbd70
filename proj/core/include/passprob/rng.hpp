#pragma once

#include <cstdint>
#include <random>

namespace passprob::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based stream derivation: the same (seed, salt, index) always yields
// the same engine, independent of how work is scheduled across threads.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t salt, std::uint64_t index = 0) {
    return splitmix64(splitmix64(seed ^ salt) + index);
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t salt, std::uint64_t index = 0) {
    return std::mt19937_64(derive(seed, salt, index));
}

// Stream salts, one per subsystem.
inline constexpr std::uint64_t kSaltFold = 0xf01dULL;
inline constexpr std::uint64_t kSaltTree = 0x7ee5ULL;
inline constexpr std::uint64_t kSaltSynth = 0x5a10ULL;

}  // namespace passprob::rng
