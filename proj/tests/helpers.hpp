#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "triax/rng.hpp"
#include "triax/tensor.hpp"

namespace testutil {

using triax::index_t;
using triax::Matrix;
using triax::Tensor3;

inline Tensor3 random_tensor(index_t n1, index_t n2, index_t n3, std::uint64_t seed) {
    Tensor3 x(n1, n2, n3);
    triax::SplitMix64 rng(seed);
    for (index_t i = 0; i < x.size(); ++i) x.data()[i] = 2.0 * rng.uniform01() - 1.0;
    return x;
}

inline Matrix random_matrix(index_t rows, index_t cols, std::uint64_t seed) {
    Matrix m(rows, cols);
    triax::SplitMix64 rng(seed);
    for (index_t c = 0; c < cols; ++c)
        for (index_t r = 0; r < rows; ++r) m(r, c) = 2.0 * rng.uniform01() - 1.0;
    return m;
}

inline Matrix random_symmetric(index_t n, std::uint64_t seed) {
    Matrix m(n, n);
    triax::SplitMix64 rng(seed);
    for (index_t r = 0; r < n; ++r)
        for (index_t c = r; c < n; ++c) {
            const double v = 2.0 * rng.uniform01() - 1.0;
            m(r, c) = v;
            m(c, r) = v;
        }
    return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    double best = 0.0;
    for (index_t c = 0; c < a.cols(); ++c)
        for (index_t r = 0; r < a.rows(); ++r)
            best = std::max(best, std::abs(a(r, c) - b(r, c)));
    return best;
}

inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
    double best = 0.0;
    for (index_t i = 0; i < a.size(); ++i)
        best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
    return best;
}

inline double max_abs(const Tensor3& a) {
    double best = 0.0;
    for (index_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a.data()[i]));
    return best;
}

inline double max_abs(const Matrix& a) {
    double best = 0.0;
    for (index_t c = 0; c < a.cols(); ++c)
        for (index_t r = 0; r < a.rows(); ++r) best = std::max(best, std::abs(a(r, c)));
    return best;
}

// Max-norm of Q^T Q - I.
inline double orthonormality_defect(const Matrix& q) {
    double best = 0.0;
    for (index_t a = 0; a < q.cols(); ++a)
        for (index_t b = 0; b < q.cols(); ++b) {
            double dot = 0.0;
            for (index_t r = 0; r < q.rows(); ++r) dot += q(r, a) * q(r, b);
            best = std::max(best, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    return best;
}

// Max-norm distance between the column-space projectors of two
// orthonormal matrices (sign/rotation invariant subspace comparison).
inline double projector_distance(const Matrix& a, const Matrix& b) {
    double best = 0.0;
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.rows(); ++j) {
            double pa = 0.0, pb = 0.0;
            for (index_t c = 0; c < a.cols(); ++c) pa += a(i, c) * a(j, c);
            for (index_t c = 0; c < b.cols(); ++c) pb += b(i, c) * b(j, c);
            best = std::max(best, std::abs(pa - pb));
        }
    return best;
}

} // namespace testutil
