// Seedable, splittable randomness. Every sampler takes an explicit seed or
// generator; parallel work derives independent streams with split_stream.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace anneal {

using Rng = std::mt19937_64;

// SplitMix64 step, used to decorrelate (seed, stream) pairs
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng seeded_rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    return Rng(splitmix64(s));
}

// stream k of a master seed; streams are independent for distinct k
inline Rng split_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL);
    return Rng(splitmix64(s));
}

// uniform double in [0,1) from the top 53 bits; avoids std::uniform_real_distribution
// so that sequences are identical across standard library implementations
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// uniform index in {0,...,n-1} without modulo bias
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace anneal
