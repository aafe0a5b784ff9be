#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "triax/errors.hpp"
#include "triax/linalg.hpp"
#include "triax/tensor.hpp"

using namespace triax;
using testutil::max_abs;
using testutil::max_abs_diff;
using testutil::random_matrix;
using testutil::random_tensor;

TEST_CASE("unfold: constant tensor, single entry, oracle equality") {
    Tensor3 ones(2, 3, 4, std::vector<double>(24, 1.0));
    const Matrix m1 = unfold(ones, 1);
    CHECK(m1.rows() == 2);
    CHECK(m1.cols() == 12);
    for (index_t c = 0; c < 12; ++c)
        for (index_t r = 0; r < 2; ++r) CHECK(m1(r, c) == 1.0);

    Tensor3 spike(2, 3, 4);
    spike(0, 1, 0) = 5.0;
    const Matrix ms = unfold(spike, 1);
    for (index_t c = 0; c < 12; ++c)
        for (index_t r = 0; r < 2; ++r) CHECK(ms(r, c) == ((r == 0 && c == 1) ? 5.0 : 0.0));

    const Tensor3 x = random_tensor(3, 4, 5, 11);
    for (int mode = 1; mode <= 3; ++mode)
        CHECK(max_abs_diff(unfold(x, mode), oracle::unfold(x, mode)) == 0.0);

    CHECK_THROWS_AS(unfold(x, 0), ArgumentError);
    CHECK_THROWS_AS(unfold(x, 4), ArgumentError);
}

TEST_CASE("fold inverts unfold on every mode") {
    const Tensor3 x = random_tensor(4, 3, 5, 17);
    for (int mode = 1; mode <= 3; ++mode) {
        const Tensor3 back = fold(unfold(x, mode), mode, 4, 3, 5);
        CHECK(back == x);
    }
}

TEST_CASE("mode_multiply: identity, permutation, oracle equality") {
    const Tensor3 x = random_tensor(3, 4, 5, 23);

    for (int mode = 1; mode <= 3; ++mode) {
        const Matrix eye = Matrix::identity(x.dim(mode));
        CHECK(mode_multiply(x, eye, mode, true) == x);
        CHECK(mode_multiply(x, eye, mode, false) == x);
    }

    // Swap matrix on mode 3 exchanges the frontal slices.
    Tensor3 two(2, 2, 2);
    for (index_t i = 0; i < two.size(); ++i) two.data()[i] = static_cast<double>(i + 1);
    Matrix swap(2, 2);
    swap(0, 1) = 1.0;
    swap(1, 0) = 1.0;
    const Tensor3 swapped = mode_multiply(two, swap, 3, false);
    for (index_t i = 0; i < 2; ++i)
        for (index_t j = 0; j < 2; ++j) {
            CHECK(swapped(i, j, 0) == two(i, j, 1));
            CHECK(swapped(i, j, 1) == two(i, j, 0));
        }

    const Tensor3 cube = random_tensor(3, 3, 3, 29);
    const Matrix contracting = random_matrix(3, 2, 31); // 3 rows match the extent
    const Matrix expanding = random_matrix(4, 3, 33);   // 3 cols match the extent
    for (int mode = 1; mode <= 3; ++mode) {
        Tensor3 got = mode_multiply(cube, contracting, mode, true);
        Tensor3 want = oracle::mode_multiply(cube, contracting, mode, true);
        CHECK(max_abs_diff(got, want) <= 1e-12 * std::max(1.0, max_abs(want)));

        got = mode_multiply(cube, expanding, mode, false);
        want = oracle::mode_multiply(cube, expanding, mode, false);
        CHECK(max_abs_diff(got, want) <= 1e-12 * std::max(1.0, max_abs(want)));
    }

    CHECK_THROWS_AS(mode_multiply(cube, random_matrix(4, 2, 5), 1, true), ArgumentError);
    CHECK_THROWS_AS(mode_multiply(cube, random_matrix(4, 2, 5), 1, false), ArgumentError);
}

TEST_CASE("unfold/mode_multiply consistency across modes and directions") {
    const Tensor3 x = random_tensor(4, 5, 3, 37);
    const Matrix m = random_matrix(x.dim(2), 2, 41);

    for (int mode = 1; mode <= 3; ++mode) {
        const Matrix f = random_matrix(x.dim(mode), 2, 43 + mode);
        // contract: unfold_m(Y) = F^T unfold_m(X)
        Tensor3 y = mode_multiply(x, f, mode, true);
        Matrix lhs = unfold(y, mode);
        Matrix rhs = matmul_tn(f, unfold(x, mode));
        CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, max_abs(rhs)));

        // expand: unfold_m(Y) = F unfold_m(X) with F cols matching extent
        const Matrix g = random_matrix(5, x.dim(mode), 47 + mode);
        y = mode_multiply(x, g, mode, false);
        lhs = unfold(y, mode);
        rhs = matmul(g, unfold(x, mode));
        CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, max_abs(rhs)));
    }
    (void)m;
}

TEST_CASE("frobenius_norm_sq: ones, zero, oracle") {
    CHECK(frobenius_norm_sq(Tensor3(2, 2, 2, std::vector<double>(8, 1.0))) == 8.0);
    CHECK(frobenius_norm_sq(Tensor3(3, 2, 4)) == 0.0);
    const Tensor3 x = random_tensor(4, 4, 4, 53);
    const double got = frobenius_norm_sq(x);
    const double want = oracle::frobenius_norm_sq(x);
    CHECK(std::abs(got - want) <= 1e-12 * want);
}

TEST_CASE("reconstruct_hosvd: identity factors, zero core, oracle") {
    const Tensor3 s = random_tensor(3, 3, 3, 59);
    const Matrix eye = Matrix::identity(3);
    CHECK(reconstruct_hosvd(eye, eye, eye, s) == s);

    const Matrix u = random_matrix(3, 2, 61);
    const Matrix v = random_matrix(3, 2, 67);
    const Matrix w = random_matrix(3, 2, 71);
    CHECK(max_abs(reconstruct_hosvd(u, v, w, Tensor3(2, 2, 2))) == 0.0);

    const Tensor3 core = random_tensor(2, 2, 2, 73);
    const Tensor3 got = reconstruct_hosvd(u, v, w, core);
    const Tensor3 want = oracle::reconstruct_hosvd(u, v, w, core);
    CHECK(max_abs_diff(got, want) <= 1e-12 * std::max(1.0, max_abs(want)));

    CHECK_THROWS_AS(reconstruct_hosvd(u, v, w, Tensor3(3, 2, 2)), ArgumentError);
}

TEST_CASE("reconstruct_hosvd isometry: orthonormal factors preserve the core norm") {
    const Tensor3 core = random_tensor(3, 2, 4, 79);
    // identity_padded columns are orthonormal
    const Matrix u = Matrix::identity_padded(6, 3);
    const Matrix v = Matrix::identity_padded(5, 2);
    const Matrix w = Matrix::identity_padded(7, 4);
    const double ns = frobenius_norm_sq(core);
    const double nx = frobenius_norm_sq(reconstruct_hosvd(u, v, w, core));
    CHECK(std::abs(nx - ns) <= 1e-10 * ns);
}

TEST_CASE("reconstruct_parafac: rank-1 ones, zero factor, oracle") {
    Matrix col1(2, 1, {1.0, 1.0});
    const Tensor3 ones = reconstruct_parafac(col1, col1, col1);
    for (index_t i = 0; i < ones.size(); ++i) CHECK(ones.data()[i] == 1.0);

    const Matrix u = random_matrix(3, 3, 83);
    const Matrix v = random_matrix(3, 3, 89);
    CHECK(max_abs(reconstruct_parafac(u, v, Matrix(3, 3))) == 0.0);

    const Matrix w = random_matrix(3, 3, 97);
    const Tensor3 got = reconstruct_parafac(u, v, w);
    const Tensor3 want = oracle::reconstruct_parafac(u, v, w);
    CHECK(max_abs_diff(got, want) <= 1e-12 * std::max(1.0, max_abs(want)));

    CHECK_THROWS_AS(reconstruct_parafac(u, v, random_matrix(3, 2, 101)), ArgumentError);
}

TEST_CASE("determinism: identical inputs give bitwise-identical outputs") {
    const Tensor3 x = random_tensor(4, 3, 5, 103);
    const Matrix m = random_matrix(4, 2, 107);
    CHECK(mode_multiply(x, m, 1, true) == mode_multiply(x, m, 1, true));
    CHECK(unfold(x, 2) == unfold(x, 2));
    CHECK(frobenius_norm_sq(x) == frobenius_norm_sq(x));
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Tensor3(0, 1, 1), ArgumentError);
    CHECK_THROWS_AS(Tensor3(2, 2, 2, std::vector<double>(7, 0.0)), ArgumentError);
    CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>(3, 0.0)), ArgumentError);
}
