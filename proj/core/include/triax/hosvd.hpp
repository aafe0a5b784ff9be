#pragma once

#include <utility>
#include <vector>

#include "triax/linalg.hpp"
#include "triax/tensor.hpp"

namespace triax {

struct TargetDims {
    index_t m1 = 0;
    index_t m2 = 0;
    index_t m3 = 0;
};

struct HosvdModel {
    Matrix u; // n1 x m1, orthonormal columns
    Matrix v; // n2 x m2
    Matrix w; // n3 x m3
    CoreTensor s;
};

// One alternating-update sweep leaves (U, V, W) after the full
// U -> V -> W cycle of iteration t.
struct FactorSnapshot {
    Matrix u, v, w;
};

struct HosvdTrace {
    std::vector<double> core_norm_sq;        // ||S||^2 after each sweep
    std::vector<FactorSnapshot> snapshots;   // filled when requested
};

struct HosvdOptions {
    bool record_snapshots = false;
};

// F, G, H: the mode-wise quadratic forms whose top eigenvectors give the
// alternating factor updates. Computed as M M^T of a projected unfolding,
// never by the quartic index sums (those live only in test oracles).
// compute_F(X, V, W) = unfold1(X x2 V^T x3 W^T) * (same)^T, etc.
Matrix compute_F(const Tensor3& x, const Matrix& v, const Matrix& w);
Matrix compute_G(const Tensor3& x, const Matrix& u, const Matrix& w);
Matrix compute_H(const Tensor3& x, const Matrix& u, const Matrix& v);

// S = U^T x1 V^T x2 W^T x3 X for orthonormal factors.
CoreTensor core_tensor(const Tensor3& x, const Matrix& u, const Matrix& v, const Matrix& w);

// J1 = ||X||^2 - ||S||^2.
double hosvd_objective(const Tensor3& x, const CoreTensor& s);

// Exactly T sweeps of the U -> V -> W cycle from (V0, W0); each factor
// update takes the top-m sign-canonicalized eigenvectors of F/G/H with
// the projectors refreshed immediately after each update. Inits need not
// be orthonormal; the first sweep restores orthonormality. An initial U
// is never needed. Objective is non-decreasing.
std::pair<HosvdModel, HosvdTrace> hosvd_run(const Tensor3& x, TargetDims dims, const Matrix& v0,
                                            const Matrix& w0, int iterations,
                                            const HosvdOptions& options = {});

} // namespace triax
