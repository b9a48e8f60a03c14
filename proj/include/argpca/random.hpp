#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace argpca {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives the seed of an independent substream from a base seed and a key path
/// (design id, dimension, replication index, ...). The result depends only on the
/// arguments.
constexpr std::uint64_t substream_seed(std::uint64_t base_seed,
                                       std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix64(base_seed);
    for (auto k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

inline Engine make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Engine(seq);
}

}  // namespace argpca
