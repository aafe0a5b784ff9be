#pragma once

#include <cstdint>

#include "triax/tensor.hpp"

namespace triax {

// Image randomizations applied per frontal slice X[:, :, k]. Slices are
// n1 rows (vertical, index i) by n2 columns (horizontal, index j).
// With per_image = true each slice uses substream derive_seed(seed, k);
// otherwise one draw from derive_seed(seed, 0) is shared by all slices.

// Partition each slice into an n x n grid and permute the grid cells by
// a uniform random permutation (Fisher-Yates over the n*n cells,
// destination cell g receiving source cell perm[g]; cells are indexed
// row-major, g = grid_row * n + grid_col). n must divide both n1 and n2.
Tensor3 block_scramble(const Tensor3& x, index_t n, std::uint64_t seed, bool per_image = true);

// Select floor(alpha * n1 * n2) pixel positions per slice without
// replacement (positions indexed column-major, p = j * n1 + i), then
// permute the selected values uniformly among the selected positions.
// Unselected pixels are untouched. 0 < alpha <= 1.
Tensor3 pixel_scramble(const Tensor3& x, double alpha, std::uint64_t seed, bool per_image = true);

struct Occlusion {
    index_t x = 0;      // first occluded column (mode-2 index j)
    index_t y = 0;      // first occluded row (mode-1 index i)
    index_t width = 0;  // columns covered
    index_t height = 0; // rows covered
    double fill = 0.0;
    bool per_image_position = false; // redraw (x, y) per slice, size fixed
};

Tensor3 occlude(const Tensor3& x, const Occlusion& rect, std::uint64_t seed = 0);

} // namespace triax
