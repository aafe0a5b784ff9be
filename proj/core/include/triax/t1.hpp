#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "triax/tensor.hpp"

namespace triax {

// One-sided decomposition of the third mode: X^(k) ~ sum_r C^(r) W[k][r]
// with orthonormal W. W's columns are the principal eigenvectors of the
// slice Gram matrix, i.e. the PCA of the frontal slices viewed as vectors.
struct T1Model {
    Matrix w;              // n3 x m3, orthonormal
    std::vector<Matrix> c; // m3 basis slices, each n1 x n2
    double objective;      // ||X||^2 - tr(W^T H~ W)
    double objective_direct; // residual sum over slices; must agree
};

// Slice Gram matrix H~[k][k'] = sum_ij X[i][j][k] * X[i][j][k'].
Matrix t1_gram(const Tensor3& x);

T1Model t1_solve(const Tensor3& x, index_t m3);

// The seven prescribed starting points:
//   R1           PCA W plus identity-padded V (the warm start)
//   R2a,R2b,R2c  dense uniform(0,1) V and W
//   R3a,R3b,R3c  as R2 but with 1, 2, 3 all-zero columns in each of V, W
// Start i draws from substream derive_seed(master_seed, i). Within a
// start, W0 entries are drawn first (column-major, zeroed columns
// skipped), then V0 the same way; R3 zero-column positions are sampled
// without replacement before the fills, W first, then V.
struct InitStart {
    std::string label;
    Matrix v0;
    Matrix w0;
    std::uint64_t seed; // substream seed (R1 draws nothing)
};

struct InitBundle {
    std::array<InitStart, 7> starts;
    std::uint64_t master_seed = 0;
    bool r1_padded = false; // R1 columns zero-padded past the PCA basis
};

// v_cols/w_cols are m2/m3 for HOSVD runs and R/R for ParaFac runs.
// allow_overcomplete permits more columns than the mode extent (the
// ParaFac rank > n case); R1 then zero-pads and the bundle is flagged.
InitBundle make_init_bundle(const Tensor3& x, index_t v_cols, index_t w_cols,
                            std::uint64_t master_seed, bool allow_overcomplete = false);

} // namespace triax
