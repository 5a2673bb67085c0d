#pragma once

#include <cstdint>
#include <random>

namespace fairmo {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used as a counter-based expansion of a root seed so that
// stream i is reproducible without drawing streams 0..i-1.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t purpose = 0) noexcept
{
    return mix64(mix64(root ^ mix64(stream)) + purpose);
}

// Purpose tags for derive_seed, so split and EA streams of one run never alias.
namespace seed_purpose {
inline constexpr std::uint64_t split = 1;
inline constexpr std::uint64_t optimizer = 2;
inline constexpr std::uint64_t subsample = 3;
} // namespace seed_purpose

} // namespace fairmo
