#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

// Deterministic randomness plumbing. All stochastic code in the library
// draws from std::mt19937_64 (whose output sequence is pinned by the
// standard) through the helpers below; std::<distribution> types are
// avoided because their algorithms vary between standard libraries.

namespace cliquebed {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream seed for (base, tag); used for per-read, per-try and
// per-setting generators so parallel order never changes results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return splitmix64(splitmix64(base) ^ splitmix64(tag + 0x51ed2701ULL));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

// Uniform in [0,1) with 53 random bits.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0,n), rejection sampled (no modulo bias).
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t umax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t lim = umax - umax % n;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= lim);
    return x % n;
}

// Fisher-Yates; std::shuffle is not portable across standard libraries.
template <class T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t k = static_cast<std::size_t>(uniform_below(g, i));
        std::swap(v[i - 1], v[k]);
    }
}

}  // namespace cliquebed
