#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "triax/errors.hpp"

namespace triax {

// All randomness in the library flows from SplitMix64 streams. Every
// consumer derives its own substream seed via derive_seed(), so results
// are reproducible from a single master seed and identical across
// platforms (integer arithmetic plus one exact double multiply).

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// Final mixing function of SplitMix64 (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Substream derivation: stream k of a master seed. Used for
// test -> bundle, bundle -> start, scramble -> slice, generator -> factor.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master + kGoldenGamma * (stream + 1));
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform double in [0, 1), 53 significant bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, n). n == 1 consumes no draw.
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) throw ArgumentError("bounded: n must be positive");
        if (n == 1) return 0;
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

    // Standard normal via Box-Muller (cosine branch only).
    double gaussian() {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

// In-place Fisher-Yates shuffle, iterating from the top index down.
template <typename T>
void shuffle(std::vector<T>& a, SplitMix64& rng) {
    for (std::size_t i = a.size(); i > 1; --i) {
        const std::uint64_t j = rng.bounded(i);
        std::swap(a[i - 1], a[j]);
    }
}

// First `count` entries of a partial Fisher-Yates pass over [0, n):
// a uniform sample of `count` distinct indices, in draw order.
inline std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t count,
                                                            SplitMix64& rng) {
    if (n < 0 || count < 0 || count > n)
        throw ArgumentError("sample_without_replacement: need 0 <= count <= n");
    std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), std::int64_t{0});
    for (std::int64_t i = 0; i < count; ++i) {
        const std::uint64_t j =
            static_cast<std::uint64_t>(i) + rng.bounded(static_cast<std::uint64_t>(n - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(count));
    return idx;
}

} // namespace triax
