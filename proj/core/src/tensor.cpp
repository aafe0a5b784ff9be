#include "triax/tensor.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace triax {

namespace {

void require_positive_dims(index_t n1, index_t n2, index_t n3) {
    if (n1 < 1 || n2 < 1 || n3 < 1)
        throw ArgumentError("Tensor3: dims must be positive, got (" + std::to_string(n1) + ", " +
                            std::to_string(n2) + ", " + std::to_string(n3) + ")");
}

// Raw column-major GEMM kernels. C must be zero-initialized; all loops
// keep the innermost index running down contiguous columns.

// C[m x n] = A[m x k] * B[k x n]
void gemm_nn(const double* a, index_t m, index_t k, const double* b, index_t n, double* c) {
    for (index_t j = 0; j < n; ++j) {
        const double* bcol = b + j * k;
        double* ccol = c + j * m;
        for (index_t l = 0; l < k; ++l) {
            const double blj = bcol[l];
            if (blj == 0.0) continue;
            const double* acol = a + l * m;
            for (index_t i = 0; i < m; ++i) ccol[i] += acol[i] * blj;
        }
    }
}

// C[m x n] = A^T * B where A is k x m, B is k x n
void gemm_tn(const double* a, index_t k, index_t m, const double* b, index_t n, double* c) {
    for (index_t j = 0; j < n; ++j) {
        const double* bcol = b + j * k;
        double* ccol = c + j * m;
        for (index_t i = 0; i < m; ++i) {
            const double* acol = a + i * k;
            double acc = 0.0;
            for (index_t l = 0; l < k; ++l) acc += acol[l] * bcol[l];
            ccol[i] = acc;
        }
    }
}

// C[m x n] = A[m x k] * B^T where B is n x k
void gemm_nt(const double* a, index_t m, index_t k, const double* b, index_t n, double* c) {
    for (index_t l = 0; l < k; ++l) {
        const double* acol = a + l * m;
        const double* brow = b + l * n;
        for (index_t j = 0; j < n; ++j) {
            const double bjl = brow[j];
            if (bjl == 0.0) continue;
            double* ccol = c + j * m;
            for (index_t i = 0; i < m; ++i) ccol[i] += acol[i] * bjl;
        }
    }
}

} // namespace

Matrix::Matrix(index_t rows, index_t cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1)
        throw ArgumentError("Matrix: dims must be positive, got " + std::to_string(rows) + "x" +
                            std::to_string(cols));
    v_.assign(static_cast<std::size_t>(rows * cols), 0.0);
}

Matrix::Matrix(index_t rows, index_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), v_(std::move(values)) {
    if (rows < 1 || cols < 1)
        throw ArgumentError("Matrix: dims must be positive, got " + std::to_string(rows) + "x" +
                            std::to_string(cols));
    if (v_.size() != static_cast<std::size_t>(rows * cols))
        throw ArgumentError("Matrix: value count " + std::to_string(v_.size()) +
                            " does not match dims " + std::to_string(rows) + "x" +
                            std::to_string(cols));
}

Matrix Matrix::identity(index_t n) {
    Matrix m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::identity_padded(index_t rows, index_t cols) {
    if (cols > rows)
        throw ArgumentError("identity_padded: cols " + std::to_string(cols) + " exceeds rows " +
                            std::to_string(rows));
    Matrix m(rows, cols);
    for (index_t c = 0; c < cols; ++c) m(c, c) = 1.0;
    return m;
}

bool Matrix::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

Tensor3::Tensor3(index_t n1, index_t n2, index_t n3) : n1_(n1), n2_(n2), n3_(n3) {
    require_positive_dims(n1, n2, n3);
    v_.assign(static_cast<std::size_t>(n1 * n2 * n3), 0.0);
}

Tensor3::Tensor3(index_t n1, index_t n2, index_t n3, std::vector<double> values)
    : n1_(n1), n2_(n2), n3_(n3), v_(std::move(values)) {
    require_positive_dims(n1, n2, n3);
    if (v_.size() != static_cast<std::size_t>(n1 * n2 * n3))
        throw ArgumentError("Tensor3: value count " + std::to_string(v_.size()) +
                            " does not match dims (" + std::to_string(n1) + ", " +
                            std::to_string(n2) + ", " + std::to_string(n3) + ")");
}

index_t Tensor3::dim(int mode) const {
    switch (mode) {
    case 1: return n1_;
    case 2: return n2_;
    case 3: return n3_;
    default: throw ArgumentError("Tensor3::dim: mode must be 1, 2 or 3");
    }
}

bool Tensor3::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

Matrix unfold(const Tensor3& x, int mode) {
    const index_t n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
    switch (mode) {
    case 1: {
        // The canonical buffer already is the mode-1 unfolding.
        Matrix m(n1, n2 * n3);
        std::memcpy(m.data(), x.data(), sizeof(double) * static_cast<std::size_t>(x.size()));
        return m;
    }
    case 2: {
        Matrix m(n2, n3 * n1);
        for (index_t i = 0; i < n1; ++i)
            for (index_t k = 0; k < n3; ++k)
                for (index_t j = 0; j < n2; ++j) m(j, k + n3 * i) = x(i, j, k);
        return m;
    }
    case 3: {
        Matrix m(n3, n1 * n2);
        for (index_t j = 0; j < n2; ++j)
            for (index_t i = 0; i < n1; ++i)
                for (index_t k = 0; k < n3; ++k) m(k, i + n1 * j) = x(i, j, k);
        return m;
    }
    default: throw ArgumentError("unfold: mode must be 1, 2 or 3");
    }
}

Tensor3 fold(const Matrix& m, int mode, index_t n1, index_t n2, index_t n3) {
    Tensor3 x(n1, n2, n3);
    switch (mode) {
    case 1:
        if (m.rows() != n1 || m.cols() != n2 * n3)
            throw ArgumentError("fold: matrix shape does not match mode-1 layout");
        std::memcpy(x.data(), m.data(), sizeof(double) * static_cast<std::size_t>(x.size()));
        return x;
    case 2:
        if (m.rows() != n2 || m.cols() != n3 * n1)
            throw ArgumentError("fold: matrix shape does not match mode-2 layout");
        for (index_t i = 0; i < n1; ++i)
            for (index_t k = 0; k < n3; ++k)
                for (index_t j = 0; j < n2; ++j) x(i, j, k) = m(j, k + n3 * i);
        return x;
    case 3:
        if (m.rows() != n3 || m.cols() != n1 * n2)
            throw ArgumentError("fold: matrix shape does not match mode-3 layout");
        for (index_t j = 0; j < n2; ++j)
            for (index_t i = 0; i < n1; ++i)
                for (index_t k = 0; k < n3; ++k) x(i, j, k) = m(k, i + n1 * j);
        return x;
    default: throw ArgumentError("fold: mode must be 1, 2 or 3");
    }
}

Tensor3 mode_multiply(const Tensor3& x, const Matrix& m, int mode, bool contract) {
    if (mode < 1 || mode > 3) throw ArgumentError("mode_multiply: mode must be 1, 2 or 3");
    const index_t n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
    const index_t extent = x.dim(mode);
    const index_t contracted = contract ? m.rows() : m.cols();
    if (contracted != extent)
        throw ArgumentError("mode_multiply: factor contracts " + std::to_string(contracted) +
                            " against tensor extent " + std::to_string(extent) + " on mode " +
                            std::to_string(mode));
    const index_t out = contract ? m.cols() : m.rows();

    switch (mode) {
    case 1: {
        Tensor3 y(out, n2, n3);
        // Buffer viewed as column-major n1 x (n2*n3).
        if (contract)
            gemm_tn(m.data(), n1, out, x.data(), n2 * n3, y.data());
        else
            gemm_nn(m.data(), out, n1, x.data(), n2 * n3, y.data());
        return y;
    }
    case 2: {
        Tensor3 y(n1, out, n3);
        // Frontal slice k is a contiguous column-major n1 x n2 matrix.
        for (index_t k = 0; k < n3; ++k) {
            const double* xs = x.data() + k * n1 * n2;
            double* ys = y.data() + k * n1 * out;
            if (contract)
                gemm_nn(xs, n1, n2, m.data(), out, ys); // X_k * M
            else
                gemm_nt(xs, n1, n2, m.data(), out, ys); // X_k * M^T
        }
        return y;
    }
    case 3: {
        Tensor3 y(n1, n2, out);
        // Buffer viewed as column-major (n1*n2) x n3.
        if (contract)
            gemm_nn(x.data(), n1 * n2, n3, m.data(), out, y.data());
        else
            gemm_nt(x.data(), n1 * n2, n3, m.data(), out, y.data());
        return y;
    }
    default: throw ArgumentError("mode_multiply: mode must be 1, 2 or 3");
    }
}

double frobenius_norm_sq(const Tensor3& x) {
    double acc = 0.0;
    for (double v : x.values()) acc += v * v;
    return acc;
}

double frobenius_norm(const Tensor3& x) { return std::sqrt(frobenius_norm_sq(x)); }

Tensor3 reconstruct_hosvd(const Matrix& u, const Matrix& v, const Matrix& w, const CoreTensor& s) {
    if (u.cols() != s.n1() || v.cols() != s.n2() || w.cols() != s.n3())
        throw ArgumentError("reconstruct_hosvd: factor columns do not match core dims");
    Tensor3 t = mode_multiply(s, u, 1, /*contract=*/false);
    t = mode_multiply(t, v, 2, /*contract=*/false);
    return mode_multiply(t, w, 3, /*contract=*/false);
}

Tensor3 reconstruct_parafac(const Matrix& u, const Matrix& v, const Matrix& w) {
    const index_t r = u.cols();
    if (v.cols() != r || w.cols() != r)
        throw ArgumentError("reconstruct_parafac: factors must share the column count, got " +
                            std::to_string(u.cols()) + ", " + std::to_string(v.cols()) + ", " +
                            std::to_string(w.cols()));
    const index_t n1 = u.rows(), n2 = v.rows(), n3 = w.rows();
    Tensor3 y(n1, n2, n3);
    double* out = y.data();
    for (index_t c = 0; c < r; ++c) {
        const double* uc = u.col(c);
        const double* vc = v.col(c);
        const double* wc = w.col(c);
        std::size_t pos = 0;
        for (index_t k = 0; k < n3; ++k) {
            const double wk = wc[k];
            for (index_t j = 0; j < n2; ++j) {
                const double vw = vc[j] * wk;
                for (index_t i = 0; i < n1; ++i) out[pos++] += uc[i] * vw;
            }
        }
    }
    return y;
}

} // namespace triax
