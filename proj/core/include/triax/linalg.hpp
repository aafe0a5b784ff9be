#pragma once

#include <vector>

#include "triax/tensor.hpp"

namespace triax {

// Matrix product helpers (column-major, dense).
Matrix matmul(const Matrix& a, const Matrix& b);    // A * B
Matrix matmul_tn(const Matrix& a, const Matrix& b); // A^T * B
Matrix matmul_nt(const Matrix& a, const Matrix& b); // A * B^T
Matrix transpose(const Matrix& a);

// Eigenpairs of a symmetric matrix, eigenvalues sorted non-increasing,
// eigenvector columns orthonormal and sign-canonicalized. Within a
// numerically degenerate cluster (adjacent gap < 1e-10 * max|lambda|)
// columns are ordered lexicographically, so degenerate inputs still
// produce a reproducible basis; tests on such inputs should compare
// subspace projectors rather than columns.
struct EigenPairs {
    std::vector<double> values;
    Matrix vectors;
};

// Full spectrum. The input is symmetrized as (A + A^T)/2 first; asymmetry
// beyond 1e-8 relative is an argument error, non-finite entries a data
// error. Cyclic Jacobi up to 64x64, Householder tridiagonalization plus
// implicit-shift QL above. Deterministic: identical input bytes yield
// identical output bytes.
EigenPairs sym_eig_all(const Matrix& a);

// Top-k eigenpairs (k in [1, dim]).
EigenPairs sym_eig_topk(const Matrix& a, index_t k);

// Flip each column so its largest-magnitude entry is positive; ties are
// broken by the lowest row index; all-zero columns pass through.
Matrix canonicalize_signs(Matrix q);

// Column-wise Kronecker product, (rows_A * rows_B) x R, with B's row
// index fastest — consistent with the unfolding layouts in tensor.hpp.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

// argmin_B || Y - Z * B^T ||_F via ridge-stabilized normal equations
// (Z^T Z + ridge * I) B^T = Z^T Y with ridge = 1e-12 * trace(Z^T Z) / R.
// Z is N x R, Y is N x M, the result is M x R. An identically-zero Z
// returns the minimum-norm minimizer B = 0; a normal-equations matrix
// that is singular beyond the ridge raises NumericalError with a
// condition estimate.
Matrix solve_least_squares(const Matrix& z, const Matrix& y);

} // namespace triax
