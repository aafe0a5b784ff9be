#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "oracles.hpp"
#include "triax/errors.hpp"
#include "triax/linalg.hpp"

using namespace triax;
using testutil::max_abs;
using testutil::max_abs_diff;
using testutil::orthonormality_defect;
using testutil::random_matrix;
using testutil::random_symmetric;

TEST_CASE("sym_eig_topk: identity matrix (degenerate subspace)") {
    const EigenPairs e = sym_eig_topk(Matrix::identity(4), 2);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(orthonormality_defect(e.vectors) <= 1e-10);
    // Any orthonormal pair is valid; only the rank-2 projector property
    // is testable: P = QQ^T must be idempotent with trace 2.
    const Matrix p = matmul_nt(e.vectors, e.vectors);
    const Matrix pp = matmul(p, p);
    CHECK(max_abs_diff(p, pp) <= 1e-10);
    double trace = 0.0;
    for (index_t i = 0; i < 4; ++i) trace += p(i, i);
    CHECK(trace == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("sym_eig_topk: diagonal matrix with distinct entries") {
    Matrix d(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 2.0;
    d(2, 2) = 1.0;
    const EigenPairs e = sym_eig_topk(d, 2);
    CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    // Sign canonicalization fixes the vectors to +e1, +e2.
    CHECK(e.vectors(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.vectors(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(e.vectors(1, 0)) <= 1e-12);
    CHECK(std::abs(e.vectors(2, 1)) <= 1e-12);
}

TEST_CASE("sym_eig vs independent classical-Jacobi oracle (5x5)") {
    for (std::uint64_t seed : {7u, 13u, 99u}) {
        const Matrix a = random_symmetric(5, seed);
        const EigenPairs e = sym_eig_all(a);
        const auto want = oracle::jacobi_eigenvalues(a);
        REQUIRE(want.size() == e.values.size());
        for (std::size_t i = 0; i < want.size(); ++i)
            CHECK(std::abs(e.values[i] - want[i]) <= 1e-9 * std::max(1.0, std::abs(want[i])));
    }
}

TEST_CASE("sym_eig QL path (n > 64) matches the oracle and reconstructs") {
    const index_t n = 80;
    const Matrix a = random_symmetric(n, 211);
    const EigenPairs e = sym_eig_all(a);

    const auto want = oracle::jacobi_eigenvalues(a);
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(std::abs(e.values[i] - want[i]) <= 1e-9 * std::max(1.0, std::abs(want[i])));

    CHECK(orthonormality_defect(e.vectors) <= 1e-10);

    // Full-spectrum reconstruction sum lambda_c q_c q_c^T == A.
    Matrix recon(n, n);
    for (index_t c = 0; c < n; ++c) {
        const double lambda = e.values[static_cast<std::size_t>(c)];
        for (index_t j = 0; j < n; ++j)
            for (index_t i = 0; i < n; ++i)
                recon(i, j) += lambda * e.vectors(i, c) * e.vectors(j, c);
    }
    double fro = 0.0;
    for (index_t c = 0; c < n; ++c)
        for (index_t r = 0; r < n; ++r) fro += a(r, c) * a(r, c);
    CHECK(max_abs_diff(recon, a) <= 1e-8 * std::sqrt(fro));

    // Eigenvalue sum equals the trace.
    double trace = 0.0, sum = 0.0;
    for (index_t i = 0; i < n; ++i) trace += a(i, i);
    for (double v : e.values) sum += v;
    CHECK(std::abs(sum - trace) <= 1e-9 * std::max(1.0, std::abs(trace)));
}

TEST_CASE("sym_eig full-spectrum reconstruction on the Jacobi path") {
    const index_t n = 6;
    const Matrix a = random_symmetric(n, 223);
    const EigenPairs e = sym_eig_all(a);
    Matrix recon(n, n);
    for (index_t c = 0; c < n; ++c)
        for (index_t j = 0; j < n; ++j)
            for (index_t i = 0; i < n; ++i)
                recon(i, j) += e.values[static_cast<std::size_t>(c)] * e.vectors(i, c) *
                               e.vectors(j, c);
    double fro = 0.0;
    for (index_t c = 0; c < n; ++c)
        for (index_t r = 0; r < n; ++r) fro += a(r, c) * a(r, c);
    CHECK(max_abs_diff(recon, a) <= 1e-8 * std::sqrt(fro));

    double trace = 0.0, sum = 0.0;
    for (index_t i = 0; i < n; ++i) trace += a(i, i);
    for (double v : e.values) sum += v;
    CHECK(std::abs(sum - trace) <= 1e-9 * std::max(1.0, std::abs(trace)));
}

TEST_CASE("sym_eig: degenerate clusters get a reproducible basis") {
    // Two well-separated degenerate pairs via Q diag(5,5,1,1) Q^T.
    const index_t n = 4;
    const Matrix q0 = sym_eig_all(random_symmetric(n, 307)).vectors; // orthonormal basis
    Matrix lam(n, n);
    lam(0, 0) = 5.0;
    lam(1, 1) = 5.0;
    lam(2, 2) = 1.0;
    lam(3, 3) = 1.0;
    const Matrix a = matmul(q0, matmul_nt(lam, q0));
    const EigenPairs e1 = sym_eig_all(a);
    const EigenPairs e2 = sym_eig_all(a);
    CHECK(e1.vectors == e2.vectors); // bitwise reproducible
    CHECK(e1.values[0] == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(e1.values[2] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sym_eig error paths") {
    CHECK_THROWS_AS(sym_eig_topk(Matrix::identity(3), 0), ArgumentError);
    CHECK_THROWS_AS(sym_eig_topk(Matrix::identity(3), 4), ArgumentError);

    Matrix asym(2, 2);
    asym(0, 1) = 1.0;
    asym(1, 0) = 2.0; // far beyond 1e-8 relative
    CHECK_THROWS_AS(sym_eig_all(asym), ArgumentError);

    Matrix bad = Matrix::identity(2);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(sym_eig_all(bad), DataError);
}

TEST_CASE("canonicalize_signs: forced flips, tie rule, idempotence") {
    Matrix m(3, 1, {0.0, -3.0, 1.0});
    const Matrix flipped = canonicalize_signs(m);
    CHECK(flipped(0, 0) == 0.0);
    CHECK(flipped(1, 0) == 3.0);
    CHECK(flipped(2, 0) == -1.0);

    Matrix tie(2, 1, {2.0, -2.0});
    CHECK(canonicalize_signs(tie) == tie); // |max| tie resolved at row 0, already positive

    Matrix zero(3, 2);
    CHECK(canonicalize_signs(zero) == zero);

    const Matrix r = random_matrix(5, 4, 311);
    const Matrix once = canonicalize_signs(r);
    CHECK(canonicalize_signs(once) == once);

    // Never changes magnitudes or the projector QQ^T.
    for (index_t c = 0; c < r.cols(); ++c)
        for (index_t i = 0; i < r.rows(); ++i)
            CHECK(std::abs(once(i, c)) == std::abs(r(i, c)));
    CHECK(max_abs_diff(matmul_nt(once, once), matmul_nt(r, r)) == 0.0);
}

TEST_CASE("khatri_rao: scalar, identity columns, oracle, Hadamard identity") {
    CHECK(khatri_rao(Matrix(1, 1, {2.0}), Matrix(1, 1, {3.0}))(0, 0) == 6.0);

    const Matrix eye = Matrix::identity(2);
    const Matrix ones(2, 2, std::vector<double>(4, 1.0));
    const Matrix k = khatri_rao(eye, ones);
    // column r = e_r (x) 1, so rows 0..1 carry e_0 and rows 2..3 carry e_1
    CHECK(k(0, 0) == 1.0);
    CHECK(k(1, 0) == 1.0);
    CHECK(k(2, 0) == 0.0);
    CHECK(k(3, 0) == 0.0);
    CHECK(k(2, 1) == 1.0);
    CHECK(k(3, 1) == 1.0);

    const Matrix a = random_matrix(3, 2, 331);
    const Matrix b = random_matrix(4, 2, 337);
    CHECK(max_abs_diff(khatri_rao(a, b), oracle::khatri_rao(a, b)) == 0.0);

    // (A . B)^T (A . B) == (A^T A) o (B^T B)
    const Matrix kt = matmul_tn(khatri_rao(a, b), khatri_rao(a, b));
    const Matrix ata = matmul_tn(a, a);
    const Matrix btb = matmul_tn(b, b);
    for (index_t c = 0; c < 2; ++c)
        for (index_t r = 0; r < 2; ++r)
            CHECK(std::abs(kt(r, c) - ata(r, c) * btb(r, c)) <=
                  1e-10 * std::max(1.0, std::abs(kt(r, c))));

    CHECK_THROWS_AS(khatri_rao(a, random_matrix(4, 3, 347)), ArgumentError);
}

TEST_CASE("khatri_rao row layout matches the mode-1 unfolding convention") {
    // X = sum_r u_r o v_r o w_r must satisfy unfold1(X)^T = (W . V) U^T.
    const Matrix u = random_matrix(3, 2, 349);
    const Matrix v = random_matrix(4, 2, 353);
    const Matrix w = random_matrix(5, 2, 359);
    const Tensor3 x = reconstruct_parafac(u, v, w);
    const Matrix lhs = transpose(unfold(x, 1));
    const Matrix rhs = matmul_nt(khatri_rao(w, v), u);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, max_abs(lhs)));
}

TEST_CASE("solve_least_squares: orthonormal Z, consistent system, residual orthogonality") {
    // Orthonormal Z: B == Y^T Z.
    const Matrix z = Matrix::identity_padded(6, 3);
    const Matrix y = random_matrix(6, 4, 367);
    const Matrix b = solve_least_squares(z, y);
    const Matrix want = matmul_tn(y, z);
    CHECK(max_abs_diff(b, want) <= 1e-10 * std::max(1.0, max_abs(want)));

    // Consistent system: Y = Z C^T recovers C.
    const Matrix z2 = random_matrix(8, 3, 373);
    const Matrix c = random_matrix(5, 3, 379);
    const Matrix y2 = matmul_nt(z2, c);
    const Matrix got = solve_least_squares(z2, y2);
    CHECK(max_abs_diff(got, c) <= 1e-10 * std::max(1.0, max_abs(c)));

    // Overdetermined: the residual is orthogonal to the column space.
    const Matrix z3 = random_matrix(20, 3, 383);
    const Matrix y3 = random_matrix(20, 2, 389);
    const Matrix b3 = solve_least_squares(z3, y3);
    const Matrix resid =
        matmul_tn(z3, [&] {
            Matrix r = y3;
            const Matrix fit = matmul_nt(z3, b3);
            for (index_t cc = 0; cc < r.cols(); ++cc)
                for (index_t rr = 0; rr < r.rows(); ++rr) r(rr, cc) -= fit(rr, cc);
            return r;
        }());
    CHECK(max_abs(resid) <= 1e-9 * std::max(1.0, max_abs(y3)));

    CHECK_THROWS_AS(solve_least_squares(z3, random_matrix(19, 2, 397)), ArgumentError);
}

TEST_CASE("solve_least_squares: an all-zero Z returns the minimum-norm solution") {
    const Matrix z(4, 2);
    const Matrix y = random_matrix(4, 3, 401);
    CHECK(solve_least_squares(z, y) == Matrix(3, 2));
}

TEST_CASE("solve_least_squares: non-finite systems raise a numerical error") {
    Matrix z = random_matrix(4, 2, 409);
    z(1, 1) = std::numeric_limits<double>::infinity();
    const Matrix y = random_matrix(4, 3, 419);
    CHECK_THROWS_AS(solve_least_squares(z, y), NumericalError);
}
