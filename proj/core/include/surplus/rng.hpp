#pragma once

#include "surplus/claims.hpp"

#include <cstdint>

namespace surplus {

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream seed for one path; depends only on (master_seed, path_index), never on scheduling.
constexpr std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t path_index) noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(path_index + 0x632be59bd9b4e019ULL));
}

inline Rng path_rng(std::uint64_t master_seed, std::uint64_t path_index) {
    return Rng(path_seed(master_seed, path_index));
}

}  // namespace surplus
