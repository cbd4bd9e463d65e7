#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace banditlab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent stream seeds from a root
// seed and a counter, so adding a stream never shifts another one.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_label(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a) noexcept {
    return mix64(mix64(root) ^ mix64(a + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(root, a), b);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view label) noexcept {
    return derive_seed(root, hash_label(label));
}

// Stateless uniform integer on [lo, hi] keyed by a counter tuple.
constexpr std::uint64_t keyed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                      std::uint64_t lo, std::uint64_t hi) noexcept {
    const std::uint64_t span = hi - lo + 1;
    return lo + derive_seed(seed, a, b) % span;
}

}  // namespace banditlab
