#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bird {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for the stream identified by (master, tag...). Adding a tag value never
/// perturbs streams derived from other tag tuples.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = mix64(master);
    for (auto t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
    return h;
}

inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    return Rng{derive_seed(master, tags)};
}

} // namespace bird
