#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "helpers.hpp"
#include "triax/errors.hpp"
#include "triax/rng.hpp"
#include "triax/scramble.hpp"

using namespace triax;
using testutil::random_tensor;

namespace {

// Independent re-implementation of the documented per-slice sampling
// recipes (kept separate from the library's helpers on purpose).
struct RefRng {
    std::uint64_t s;
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 1) return 0;
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }
};

std::uint64_t ref_derive(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<int> ref_permutation(std::uint64_t seed, std::uint64_t slice, int n) {
    RefRng rng{ref_derive(seed, slice)};
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n; i > 1; --i) {
        const auto j = rng.bounded(static_cast<std::uint64_t>(i));
        std::swap(perm[static_cast<std::size_t>(i - 1)], perm[j]);
    }
    return perm;
}

std::vector<double> sorted_slice(const Tensor3& x, index_t k) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(x.n1() * x.n2()));
    for (index_t j = 0; j < x.n2(); ++j)
        for (index_t i = 0; i < x.n1(); ++i) v.push_back(x(i, j, k));
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("block_scramble: identity permutation seed leaves the tensor unchanged") {
    // Seed 0 draws the identity permutation for a 2x2 grid on slice 0
    // (verified against the documented Fisher-Yates recipe).
    REQUIRE(ref_permutation(0, 0, 4) == std::vector<int>({0, 1, 2, 3}));
    const Tensor3 x = random_tensor(4, 4, 1, 7);
    CHECK(block_scramble(x, 2, 0) == x);
}

TEST_CASE("block_scramble: hand-traced 4x4 slice with seed 42") {
    // Seed 42 draws the cycle (1, 2, 3, 0) on slice 0: destination cell g
    // receives source cell perm[g].
    REQUIRE(ref_permutation(42, 0, 4) == std::vector<int>({1, 2, 3, 0}));

    Tensor3 x(4, 4, 1);
    for (index_t i = 0; i < 4; ++i)
        for (index_t j = 0; j < 4; ++j) x(i, j, 0) = static_cast<double>(i * 4 + j);
    const Tensor3 got = block_scramble(x, 2, 42);

    const double expected[4][4] = {
        {2, 3, 8, 9},
        {6, 7, 12, 13},
        {10, 11, 0, 1},
        {14, 15, 4, 5},
    };
    for (index_t i = 0; i < 4; ++i)
        for (index_t j = 0; j < 4; ++j) CHECK(got(i, j, 0) == expected[i][j]);
}

TEST_CASE("block_scramble: per-slice multiset preservation and divisibility errors") {
    const Tensor3 x = random_tensor(8, 8, 3, 11);
    const Tensor3 y = block_scramble(x, 4, 99);
    for (index_t k = 0; k < 3; ++k) CHECK(sorted_slice(x, k) == sorted_slice(y, k));

    CHECK_THROWS_AS(block_scramble(x, 3, 0), ArgumentError);
    CHECK_THROWS_AS(block_scramble(x, 1, 0), ArgumentError);
}

TEST_CASE("block_scramble: shared permutation scrambles identical slices identically") {
    Tensor3 x(4, 4, 2);
    for (index_t j = 0; j < 4; ++j)
        for (index_t i = 0; i < 4; ++i) {
            x(i, j, 0) = static_cast<double>(i * 4 + j);
            x(i, j, 1) = static_cast<double>(i * 4 + j);
        }
    const Tensor3 shared = block_scramble(x, 2, 42, /*per_image=*/false);
    for (index_t j = 0; j < 4; ++j)
        for (index_t i = 0; i < 4; ++i) CHECK(shared(i, j, 0) == shared(i, j, 1));

    // Per-image draws differ across slices for this seed.
    REQUIRE(ref_permutation(42, 0, 4) != ref_permutation(42, 1, 4));
    const Tensor3 independent = block_scramble(x, 2, 42, /*per_image=*/true);
    bool any_diff = false;
    for (index_t j = 0; j < 4; ++j)
        for (index_t i = 0; i < 4; ++i)
            if (independent(i, j, 0) != independent(i, j, 1)) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("pixel_scramble: tiny selections are no-ops") {
    const Tensor3 x = random_tensor(5, 5, 2, 13);
    // floor(0.04 * 25) = 1 selected pixel: nothing to permute.
    CHECK(pixel_scramble(x, 0.04, 5) == x);
    CHECK_THROWS_AS(pixel_scramble(x, 0.0, 5), ArgumentError);
    CHECK_THROWS_AS(pixel_scramble(x, 1.5, 5), ArgumentError);
}

TEST_CASE("pixel_scramble: selection size, untouched pixels, multiset") {
    const Tensor3 x = random_tensor(5, 5, 3, 17);
    const Tensor3 y = pixel_scramble(x, 0.4, 23);

    for (index_t k = 0; k < 3; ++k) {
        // Reproduce the documented selection: floor(0.4*25) = 10
        // positions from the slice substream.
        RefRng rng{ref_derive(23, static_cast<std::uint64_t>(k))};
        std::vector<int> idx(25);
        std::iota(idx.begin(), idx.end(), 0);
        for (int i = 0; i < 10; ++i) {
            const auto j = static_cast<std::uint64_t>(i) +
                           rng.bounded(static_cast<std::uint64_t>(25 - i));
            std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
        }
        std::vector<bool> selected(25, false);
        for (int i = 0; i < 10; ++i) selected[static_cast<std::size_t>(idx[i])] = true;

        // Untouched positions are bitwise equal; the slice multiset is
        // preserved.
        const double* xs = x.data() + k * 25;
        const double* ys = y.data() + k * 25;
        for (int p = 0; p < 25; ++p)
            if (!selected[static_cast<std::size_t>(p)]) CHECK(xs[p] == ys[p]);
        CHECK(sorted_slice(x, k) == sorted_slice(y, k));
    }
}

TEST_CASE("pixel_scramble matches the independent re-implementation end to end") {
    const Tensor3 x = random_tensor(4, 6, 2, 29);
    const Tensor3 y = pixel_scramble(x, 0.5, 31);
    const index_t pixels = 24;
    const index_t count = 12;

    for (index_t k = 0; k < 2; ++k) {
        RefRng rng{ref_derive(31, static_cast<std::uint64_t>(k))};
        std::vector<int> idx(static_cast<std::size_t>(pixels));
        std::iota(idx.begin(), idx.end(), 0);
        for (index_t i = 0; i < count; ++i) {
            const auto j = static_cast<std::uint64_t>(i) +
                           rng.bounded(static_cast<std::uint64_t>(pixels - i));
            std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
        }
        const double* xs = x.data() + k * pixels;
        std::vector<double> vals(static_cast<std::size_t>(count));
        for (index_t i = 0; i < count; ++i)
            vals[static_cast<std::size_t>(i)] = xs[idx[static_cast<std::size_t>(i)]];
        for (std::size_t i = vals.size(); i > 1; --i) {
            const auto j = rng.bounded(i);
            std::swap(vals[i - 1], vals[j]);
        }
        std::vector<double> expected(xs, xs + pixels);
        for (index_t i = 0; i < count; ++i)
            expected[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] =
                vals[static_cast<std::size_t>(i)];

        const double* ys = y.data() + k * pixels;
        for (index_t p = 0; p < pixels; ++p) CHECK(ys[p] == expected[static_cast<std::size_t>(p)]);
    }
}

TEST_CASE("occlude: zero-area, full fill, bounds, untouched pixels") {
    const Tensor3 x = random_tensor(6, 8, 2, 37);
    CHECK(occlude(x, Occlusion{2, 2, 0, 0}) == x);

    const Tensor3 black = occlude(x, Occlusion{0, 0, 8, 6, 0.0});
    for (index_t i = 0; i < black.size(); ++i) CHECK(black.data()[i] == 0.0);

    const Occlusion rect{3, 1, 2, 4, 7.5};
    const Tensor3 y = occlude(x, rect);
    for (index_t k = 0; k < 2; ++k)
        for (index_t j = 0; j < 8; ++j)
            for (index_t i = 0; i < 6; ++i) {
                const bool inside = j >= 3 && j < 5 && i >= 1 && i < 5;
                if (inside)
                    CHECK(y(i, j, k) == 7.5);
                else
                    CHECK(y(i, j, k) == x(i, j, k));
            }

    CHECK_THROWS_AS(occlude(x, Occlusion{7, 0, 2, 2}), ArgumentError);
    CHECK_THROWS_AS(occlude(x, Occlusion{0, 5, 2, 2}), ArgumentError);
}

TEST_CASE("occlude: per-image positions are deterministic and in bounds") {
    const Tensor3 x = random_tensor(10, 10, 4, 41);
    Occlusion rect{0, 0, 4, 3, 0.0, /*per_image_position=*/true};
    const Tensor3 a = occlude(x, rect, 77);
    const Tensor3 b = occlude(x, rect, 77);
    CHECK(a == b);
    // Every slice must still hold exactly width*height filled pixels
    // (fill value 0 cannot collide with the (0,1)-free random values
    // scaled to (-1,1) almost surely; count zeros instead).
    for (index_t k = 0; k < 4; ++k) {
        int zeros = 0;
        for (index_t j = 0; j < 10; ++j)
            for (index_t i = 0; i < 10; ++i)
                if (a(i, j, k) == 0.0) ++zeros;
        CHECK(zeros == 12);
    }
}

TEST_CASE("scramble determinism under (spec, seed)") {
    const Tensor3 x = random_tensor(8, 8, 2, 43);
    CHECK(block_scramble(x, 2, 5) == block_scramble(x, 2, 5));
    CHECK(pixel_scramble(x, 0.6, 5) == pixel_scramble(x, 0.6, 5));
}
