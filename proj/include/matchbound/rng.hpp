#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace matchbound {

// Mixes a 64-bit value into a well-distributed seed (SplitMix64 finalizer).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform draw in [0, n). Implemented directly instead of through
// std::uniform_int_distribution, whose output is implementation-defined;
// seeded instances must be byte-identical across standard libraries.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % n;
}

// Bernoulli draw using the top 53 bits, again avoiding
// implementation-defined std distributions.
inline bool chance(std::mt19937_64& rng, double probability) {
    if (probability <= 0.0) return false;
    if (probability >= 1.0) return true;
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return u < probability;
}

// Fisher-Yates shuffle on top of bounded().
template <typename T>
void shuffle_in_place(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace matchbound
