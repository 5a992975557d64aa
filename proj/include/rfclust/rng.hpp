#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace rfclust {

// SplitMix64 mixing step. Used to turn structured stream keys into
// well-distributed engine seeds so that neighbouring keys (class 3 vs
// class 4, run 0 vs run 1) yield unrelated streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Pipeline stages own disjoint key spaces; reusing a (seed, ids...) tuple in
// two stages must not alias their streams.
enum class RngStage : std::uint64_t {
    kInstance = 1,
    kDeRun = 2,
    kSampling = 3,
    kTree = 4,
    kGridSearch = 5,
    kImportance = 6,
    kFold = 7,
};

inline std::uint64_t stream_key(std::uint64_t seed, RngStage stage, std::uint64_t a = 0,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stage));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

inline std::mt19937_64 make_rng(std::uint64_t key) { return std::mt19937_64{key}; }

// Uniform in [0, 1) with 53-bit resolution. Implemented directly on the
// engine output so results are identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

// Standard normal via Box-Muller; draws exactly two uniforms per call.
inline double gaussian(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

// Fisher-Yates on top of uniform_index; std::shuffle is not portable across
// standard libraries.
template <typename RandomIt>
void shuffle(RandomIt first, RandomIt last, std::mt19937_64& rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        const std::uint64_t j = uniform_index(rng, i);
        std::swap(first[i - 1], first[j]);
    }
}

}  // namespace rfclust
