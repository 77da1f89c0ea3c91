#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace psmine {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Independent child seed for a named stream, e.g. ("RR/spec-150", run 7).
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view key, std::uint64_t index = 0) noexcept {
    return splitmix64(splitmix64(base ^ fnv1a(key)) + index);
}

}  // namespace psmine
