#pragma once

#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <random>
#include <utility>

namespace ldgm {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Split rule for per-job RNG streams: the root seed is folded with each
/// stream tag in order through SplitMix64. Same (root, tags) -> same seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t s = splitmix64(root);
    for (auto t : tags) s = splitmix64(s ^ splitmix64(t + 0x632BE59BD9B4E019ULL));
    return s;
}

// Stream tags. Graph, source and encoder randomness never share a stream.
inline constexpr std::uint64_t kStreamGraph = 1;
inline constexpr std::uint64_t kStreamSource = 2;
inline constexpr std::uint64_t kStreamEncoder = 3;

/// Uniform integer in [0, n). Portable across standard libraries (the
/// std:: distributions are implementation-defined).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    // Reject the low 2^64 mod n outputs so every residue is equally likely.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = rng();
        if (x >= threshold) return x % n;
    }
}

inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0; }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Fisher-Yates shuffle built on uniform_index.
template <class RandomIt>
void shuffle(RandomIt first, RandomIt last, Rng& rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        const auto j = uniform_index(rng, i);
        std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1), first + static_cast<std::ptrdiff_t>(j));
    }
}

}  // namespace ldgm
