#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "triax/errors.hpp"

namespace triax {

using index_t = std::int64_t;

// Dense real matrix, column-major storage. Factor matrices keep one
// factor per column (U, V, W, eigenvector sets, Khatri-Rao products).
class Matrix {
public:
    Matrix() = default;
    Matrix(index_t rows, index_t cols);
    Matrix(index_t rows, index_t cols, std::vector<double> values);

    static Matrix identity(index_t n);
    // rows x cols matrix with I_{cols} stacked on top of zeros (rows >= cols).
    static Matrix identity_padded(index_t rows, index_t cols);

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    index_t size() const { return rows_ * cols_; }
    bool empty() const { return v_.empty(); }

    double& operator()(index_t r, index_t c) { return v_[static_cast<std::size_t>(c * rows_ + r)]; }
    double operator()(index_t r, index_t c) const {
        return v_[static_cast<std::size_t>(c * rows_ + r)];
    }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    double* col(index_t c) { return v_.data() + c * rows_; }
    const double* col(index_t c) const { return v_.data() + c * rows_; }
    std::span<const double> values() const { return v_; }

    bool all_finite() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<double> v_;
};

// Dense order-3 real tensor X[i][j][k], dims (n1, n2, n3).
// Canonical storage: i fastest, then j, then k;
// offset(i, j, k) = (k*n2 + j)*n1 + i. The file format and the unfolding
// layouts below are all pinned to this order.
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(index_t n1, index_t n2, index_t n3);
    Tensor3(index_t n1, index_t n2, index_t n3, std::vector<double> values);

    index_t n1() const { return n1_; }
    index_t n2() const { return n2_; }
    index_t n3() const { return n3_; }
    index_t dim(int mode) const; // mode in {1,2,3}
    index_t size() const { return n1_ * n2_ * n3_; }
    bool empty() const { return v_.empty(); }

    static std::size_t offset(index_t i, index_t j, index_t k, index_t n1, index_t n2) {
        return static_cast<std::size_t>((k * n2 + j) * n1 + i);
    }

    double& operator()(index_t i, index_t j, index_t k) { return v_[offset(i, j, k, n1_, n2_)]; }
    double operator()(index_t i, index_t j, index_t k) const {
        return v_[offset(i, j, k, n1_, n2_)];
    }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::span<const double> values() const { return v_; }

    bool all_finite() const;

    friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
    index_t n1_ = 0;
    index_t n2_ = 0;
    index_t n3_ = 0;
    std::vector<double> v_;
};

// Tucker core: an order-3 tensor with the model's (m1, m2, m3) dims.
using CoreTensor = Tensor3;

// Mode-n matricization with cyclic column layouts:
//   mode 1: n1 x (n2*n3), column j + n2*k   (j fastest)
//   mode 2: n2 x (n3*n1), column k + n3*i   (k fastest)
//   mode 3: n3 x (n1*n2), column i + n1*j   (i fastest)
// The layout is part of the contract; fold() is the exact inverse.
Matrix unfold(const Tensor3& x, int mode);
Tensor3 fold(const Matrix& m, int mode, index_t n1, index_t n2, index_t n3);

// Mode-n matrix product. With contract=true the factor is applied
// transposed: mode 1 gives Y[p][j][k] = sum_i M[i][p] * X[i][j][k]
// (M is n1 x p). With contract=false the factor expands:
// Y[i][j][k] = sum_p M[i][p] * X[p][j][k] (M is n1_out x p, p = n1).
// Modes 2 and 3 are the cyclic analogues.
Tensor3 mode_multiply(const Tensor3& x, const Matrix& m, int mode, bool contract);

double frobenius_norm_sq(const Tensor3& x);
double frobenius_norm(const Tensor3& x);

// X_hat[i][j][k] = sum_{pqr} U[i][p] V[j][q] W[k][r] S[p][q][r],
// realized as three successive mode expansions.
Tensor3 reconstruct_hosvd(const Matrix& u, const Matrix& v, const Matrix& w, const CoreTensor& s);

// X_hat[i][j][k] = sum_r U[i][r] V[j][r] W[k][r].
Tensor3 reconstruct_parafac(const Matrix& u, const Matrix& v, const Matrix& w);

} // namespace triax
