#include "triax/scramble.hpp"

#include <numeric>
#include <string>
#include <vector>

#include "triax/errors.hpp"
#include "triax/rng.hpp"

namespace triax {

namespace {

std::vector<index_t> random_permutation(index_t n, SplitMix64& rng) {
    std::vector<index_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), index_t{0});
    shuffle(perm, rng);
    return perm;
}

} // namespace

Tensor3 block_scramble(const Tensor3& x, index_t n, std::uint64_t seed, bool per_image) {
    if (n < 2) throw ArgumentError("block_scramble: n must be >= 2");
    if (x.n1() % n != 0 || x.n2() % n != 0)
        throw ArgumentError("block_scramble: n = " + std::to_string(n) +
                            " must divide both image dims (" + std::to_string(x.n1()) + ", " +
                            std::to_string(x.n2()) + "); resize the tensor first");
    const index_t bh = x.n1() / n; // block rows
    const index_t bw = x.n2() / n; // block cols
    const index_t cells = n * n;

    Tensor3 out(x.n1(), x.n2(), x.n3());
    std::vector<index_t> shared;
    if (!per_image) {
        SplitMix64 rng(derive_seed(seed, 0));
        shared = random_permutation(cells, rng);
    }
    for (index_t k = 0; k < x.n3(); ++k) {
        std::vector<index_t> perm;
        if (per_image) {
            SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
            perm = random_permutation(cells, rng);
        } else {
            perm = shared;
        }
        for (index_t g = 0; g < cells; ++g) {
            const index_t src = perm[static_cast<std::size_t>(g)];
            const index_t dst_r0 = (g / n) * bh, dst_c0 = (g % n) * bw;
            const index_t src_r0 = (src / n) * bh, src_c0 = (src % n) * bw;
            for (index_t c = 0; c < bw; ++c)
                for (index_t r = 0; r < bh; ++r)
                    out(dst_r0 + r, dst_c0 + c, k) = x(src_r0 + r, src_c0 + c, k);
        }
    }
    return out;
}

Tensor3 pixel_scramble(const Tensor3& x, double alpha, std::uint64_t seed, bool per_image) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw ArgumentError("pixel_scramble: alpha must be in (0, 1], got " +
                            std::to_string(alpha));
    const index_t pixels = x.n1() * x.n2();
    const index_t count = static_cast<index_t>(alpha * static_cast<double>(pixels));

    Tensor3 out = x;
    if (count <= 1) return out; // nothing to permute

    for (index_t k = 0; k < x.n3(); ++k) {
        SplitMix64 rng(derive_seed(seed, per_image ? static_cast<std::uint64_t>(k) : 0));
        const auto positions = sample_without_replacement(pixels, count, rng);
        std::vector<double> vals(static_cast<std::size_t>(count));
        const double* slice = x.data() + k * pixels;
        for (index_t i = 0; i < count; ++i)
            vals[static_cast<std::size_t>(i)] = slice[positions[static_cast<std::size_t>(i)]];
        shuffle(vals, rng);
        double* oslice = out.data() + k * pixels;
        for (index_t i = 0; i < count; ++i)
            oslice[positions[static_cast<std::size_t>(i)]] = vals[static_cast<std::size_t>(i)];
    }
    return out;
}

Tensor3 occlude(const Tensor3& x, const Occlusion& rect, std::uint64_t seed) {
    if (rect.x < 0 || rect.y < 0 || rect.width < 0 || rect.height < 0 ||
        rect.y + rect.height > x.n1() || rect.x + rect.width > x.n2())
        throw ArgumentError("occlude: rectangle (" + std::to_string(rect.x) + ", " +
                            std::to_string(rect.y) + ", " + std::to_string(rect.width) + ", " +
                            std::to_string(rect.height) + ") out of bounds for " +
                            std::to_string(x.n1()) + "x" + std::to_string(x.n2()) + " slices");

    Tensor3 out = x;
    if (rect.width == 0 || rect.height == 0) return out;

    for (index_t k = 0; k < x.n3(); ++k) {
        index_t cx = rect.x, cy = rect.y;
        if (rect.per_image_position) {
            SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
            cx = static_cast<index_t>(
                rng.bounded(static_cast<std::uint64_t>(x.n2() - rect.width + 1)));
            cy = static_cast<index_t>(
                rng.bounded(static_cast<std::uint64_t>(x.n1() - rect.height + 1)));
        }
        for (index_t j = cx; j < cx + rect.width; ++j)
            for (index_t i = cy; i < cy + rect.height; ++i) out(i, j, k) = rect.fill;
    }
    return out;
}

} // namespace triax
