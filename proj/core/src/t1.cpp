#include "triax/t1.hpp"

#include <algorithm>
#include <string>

#include "triax/errors.hpp"
#include "triax/linalg.hpp"
#include "triax/rng.hpp"

namespace triax {

namespace {

// Shared W computation so R1 inits are bitwise identical to t1_solve.
Matrix t1_basis(const Matrix& gram, index_t m3) { return sym_eig_topk(gram, m3).vectors; }

// Uniform(0,1) fill in column-major order, skipping zeroed columns.
void fill_uniform(Matrix& m, const std::vector<bool>& zero_col, SplitMix64& rng) {
    for (index_t c = 0; c < m.cols(); ++c) {
        if (zero_col[static_cast<std::size_t>(c)]) continue;
        double* col = m.col(c);
        for (index_t r = 0; r < m.rows(); ++r) col[r] = rng.uniform01();
    }
}

Matrix random_start(index_t rows, index_t cols, index_t zero_cols, SplitMix64& rng) {
    Matrix m(rows, cols);
    std::vector<bool> zeroed(static_cast<std::size_t>(cols), false);
    if (zero_cols > 0) {
        const auto picks = sample_without_replacement(cols, std::min(zero_cols, cols), rng);
        for (index_t p : picks) zeroed[static_cast<std::size_t>(p)] = true;
    }
    fill_uniform(m, zeroed, rng);
    return m;
}

} // namespace

Matrix t1_gram(const Tensor3& x) {
    // unfold3(X) unfold3(X)^T computed off the canonical buffer viewed as
    // a column-major (n1*n2) x n3 matrix.
    const Matrix slices(x.n1() * x.n2(), x.n3(),
                        std::vector<double>(x.values().begin(), x.values().end()));
    return matmul_tn(slices, slices);
}

T1Model t1_solve(const Tensor3& x, index_t m3) {
    if (m3 < 1 || m3 > x.n3())
        throw ArgumentError("t1_solve: m3 = " + std::to_string(m3) + " out of range [1, " +
                            std::to_string(x.n3()) + "]");
    const Matrix gram = t1_gram(x);
    T1Model model;
    model.w = t1_basis(gram, m3);

    // tr(W^T H~ W)
    const Matrix hw = matmul(gram, model.w);
    double captured = 0.0;
    for (index_t c = 0; c < m3; ++c) {
        const double* wc = model.w.col(c);
        const double* hc = hw.col(c);
        for (index_t r = 0; r < x.n3(); ++r) captured += wc[r] * hc[r];
    }
    model.objective = frobenius_norm_sq(x) - captured;

    // C^(r) = sum_k X^(k) W[k][r]: slices of X x3 W^T.
    const Tensor3 c = mode_multiply(x, model.w, 3, true);
    model.c.reserve(static_cast<std::size_t>(m3));
    for (index_t r = 0; r < m3; ++r) {
        Matrix slice(x.n1(), x.n2());
        for (index_t j = 0; j < x.n2(); ++j)
            for (index_t i = 0; i < x.n1(); ++i) slice(i, j) = c(i, j, r);
        model.c.push_back(std::move(slice));
    }

    // Direct residual of the slice-wise model.
    const Tensor3 fitted = mode_multiply(c, model.w, 3, false);
    double resid = 0.0;
    for (index_t i = 0; i < x.size(); ++i) {
        const double d = x.data()[i] - fitted.data()[i];
        resid += d * d;
    }
    model.objective_direct = resid;
    return model;
}

InitBundle make_init_bundle(const Tensor3& x, index_t v_cols, index_t w_cols,
                            std::uint64_t master_seed, bool allow_overcomplete) {
    if (v_cols < 1 || w_cols < 1)
        throw ArgumentError("make_init_bundle: column counts must be positive");
    if (!allow_overcomplete && (v_cols > x.n2() || w_cols > x.n3()))
        throw ArgumentError("make_init_bundle: requested dims exceed tensor dims (" +
                            std::to_string(v_cols) + " > " + std::to_string(x.n2()) + " or " +
                            std::to_string(w_cols) + " > " + std::to_string(x.n3()) + ")");

    InitBundle bundle;
    bundle.master_seed = master_seed;

    // R1: PCA columns for W, identity padding for V. Overcomplete
    // requests zero-pad past the available basis and are flagged.
    const index_t pca_cols = std::min(w_cols, x.n3());
    const Matrix basis = t1_basis(t1_gram(x), pca_cols);
    Matrix w1(x.n3(), w_cols);
    for (index_t c = 0; c < pca_cols; ++c)
        std::copy(basis.col(c), basis.col(c) + x.n3(), w1.col(c));
    Matrix v1(x.n2(), v_cols);
    const index_t eye_cols = std::min(v_cols, x.n2());
    for (index_t c = 0; c < eye_cols; ++c) v1(c, c) = 1.0;
    bundle.r1_padded = (w_cols > x.n3()) || (v_cols > x.n2());
    bundle.starts[0] = InitStart{"R1", std::move(v1), std::move(w1), derive_seed(master_seed, 0)};

    static constexpr const char* kLabels[7] = {"R1", "R2a", "R2b", "R2c", "R3a", "R3b", "R3c"};
    static constexpr index_t kZeroCols[7] = {0, 0, 0, 0, 1, 2, 3};
    for (int i = 1; i < 7; ++i) {
        const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(i));
        SplitMix64 rng(seed);
        Matrix w0 = random_start(x.n3(), w_cols, kZeroCols[i], rng);
        Matrix v0 = random_start(x.n2(), v_cols, kZeroCols[i], rng);
        bundle.starts[static_cast<std::size_t>(i)] =
            InitStart{kLabels[i], std::move(v0), std::move(w0), seed};
    }
    return bundle;
}

} // namespace triax
