#include "triax/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "triax/errors.hpp"

namespace triax {

namespace {

constexpr index_t kJacobiSizeLimit = 64;
constexpr int kJacobiMaxSweeps = 64;
constexpr int kQlMaxIterations = 50;

double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

// Cyclic Jacobi with the classic small-element threshold. A is dense
// symmetric (both triangles), rotated in place; Q accumulates the
// eigenvectors as columns.
void jacobi_eig(Matrix& a, Matrix& q, std::vector<double>& d) {
    const index_t n = a.rows();
    q = Matrix::identity(n);
    d.resize(static_cast<std::size_t>(n));

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        double off = 0.0;
        for (index_t p = 0; p < n - 1; ++p)
            for (index_t r = p + 1; r < n; ++r) off += std::abs(a(p, r));
        if (off == 0.0) break;

        const double thresh = (sweep < 3) ? 0.2 * off / static_cast<double>(n * n) : 0.0;

        for (index_t p = 0; p < n - 1; ++p) {
            for (index_t r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                const double small = 100.0 * std::abs(apr);
                // Skip rotations that can no longer change the diagonal.
                if (sweep > 3 && std::abs(a(p, p)) + small == std::abs(a(p, p)) &&
                    std::abs(a(r, r)) + small == std::abs(a(r, r))) {
                    a(p, r) = 0.0;
                    a(r, p) = 0.0;
                    continue;
                }
                if (std::abs(apr) <= thresh) continue;

                const double theta = 0.5 * (a(r, r) - a(p, p)) / apr;
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double h = t * apr;

                a(p, p) -= h;
                a(r, r) += h;
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                for (index_t i = 0; i < n; ++i) {
                    if (i == p || i == r) continue;
                    const double aip = a(i, p);
                    const double air = a(i, r);
                    a(i, p) = aip - s * (air + tau * aip);
                    a(i, r) = air + s * (aip - tau * air);
                    a(p, i) = a(i, p);
                    a(r, i) = a(i, r);
                }
                for (index_t i = 0; i < n; ++i) {
                    const double qip = q(i, p);
                    const double qir = q(i, r);
                    q(i, p) = qip - s * (qir + tau * qip);
                    q(i, r) = qir + s * (qip - tau * qir);
                }
            }
        }
        if (sweep == kJacobiMaxSweeps - 1)
            throw NumericalError("jacobi_eig: no convergence after " +
                                 std::to_string(kJacobiMaxSweeps) + " sweeps");
    }
    for (index_t i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = a(i, i);
}

// Householder reduction to tridiagonal form with accumulated
// transformations (EISPACK tred2, 0-based form). On return v holds the
// orthogonal matrix, d the diagonal, e the subdiagonal in e[1..n-1].
void tred2(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
    const index_t n = v.rows();
    d.assign(static_cast<std::size_t>(n), 0.0);
    e.assign(static_cast<std::size_t>(n), 0.0);
    auto D = [&](index_t i) -> double& { return d[static_cast<std::size_t>(i)]; };
    auto E = [&](index_t i) -> double& { return e[static_cast<std::size_t>(i)]; };

    for (index_t j = 0; j < n; ++j) D(j) = v(n - 1, j);

    for (index_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (index_t k = 0; k < i; ++k) scale += std::abs(D(k));
        if (scale == 0.0) {
            E(i) = D(i - 1);
            for (index_t j = 0; j < i; ++j) {
                D(j) = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (index_t k = 0; k < i; ++k) {
                D(k) /= scale;
                h += D(k) * D(k);
            }
            double f = D(i - 1);
            double g = std::sqrt(h);
            if (f > 0.0) g = -g;
            E(i) = scale * g;
            h -= f * g;
            D(i - 1) = f - g;
            for (index_t j = 0; j < i; ++j) E(j) = 0.0;

            for (index_t j = 0; j < i; ++j) {
                f = D(j);
                v(j, i) = f;
                g = E(j) + v(j, j) * f;
                for (index_t k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * D(k);
                    E(k) += v(k, j) * f;
                }
                E(j) = g;
            }
            f = 0.0;
            for (index_t j = 0; j < i; ++j) {
                E(j) /= h;
                f += E(j) * D(j);
            }
            const double hh = f / (h + h);
            for (index_t j = 0; j < i; ++j) E(j) -= hh * D(j);
            for (index_t j = 0; j < i; ++j) {
                f = D(j);
                g = E(j);
                for (index_t k = j; k <= i - 1; ++k) v(k, j) -= (f * E(k) + g * D(k));
                D(j) = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        D(i) = h;
    }

    // Accumulate transformations.
    for (index_t i = 0; i < n - 1; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = D(i + 1);
        if (h != 0.0) {
            for (index_t k = 0; k <= i; ++k) D(k) = v(k, i + 1) / h;
            for (index_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (index_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
                for (index_t k = 0; k <= i; ++k) v(k, j) -= g * D(k);
            }
        }
        for (index_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (index_t j = 0; j < n; ++j) {
        D(j) = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    E(0) = 0.0;
}

// Implicit-shift QL on a symmetric tridiagonal matrix (EISPACK tql2,
// 0-based form), rotating the columns of v along.
void tql2(std::vector<double>& d, std::vector<double>& e, Matrix& v) {
    const index_t n = v.rows();
    auto D = [&](index_t i) -> double& { return d[static_cast<std::size_t>(i)]; };
    auto E = [&](index_t i) -> double& { return e[static_cast<std::size_t>(i)]; };

    for (index_t i = 1; i < n; ++i) E(i - 1) = E(i);
    E(n - 1) = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = 0x1.0p-52;
    for (index_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(D(l)) + std::abs(E(l)));
        index_t m = l;
        while (m < n) {
            if (std::abs(E(m)) <= eps * tst1) break;
            ++m;
        }

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kQlMaxIterations)
                    throw NumericalError("tql2: no convergence after " +
                                         std::to_string(kQlMaxIterations) + " iterations");
                double g = D(l);
                double p = (D(l + 1) - g) / (2.0 * E(l));
                double r = hypot2(p, 1.0);
                if (p < 0.0) r = -r;
                D(l) = E(l) / (p + r);
                D(l + 1) = E(l) * (p + r);
                const double dl1 = D(l + 1);
                double h = g - D(l);
                for (index_t i = l + 2; i < n; ++i) D(i) -= h;
                f += h;

                p = D(m);
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = E(l + 1);
                double s = 0.0;
                double s2 = 0.0;
                for (index_t i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * E(i);
                    h = c * p;
                    r = hypot2(p, E(i));
                    E(i + 1) = s * r;
                    s = E(i) / r;
                    c = p / r;
                    p = c * D(i) - s * g;
                    D(i + 1) = h + s * (c * g + s * D(i));
                    for (index_t k = 0; k < n; ++k) {
                        h = v(k, i + 1);
                        v(k, i + 1) = s * v(k, i) + c * h;
                        v(k, i) = c * v(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * E(l) / dl1;
                E(l) = s * p;
                D(l) = c * p;
            } while (std::abs(E(l)) > eps * tst1);
        }
        D(l) += f;
        E(l) = 0.0;
    }
}

} // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ArgumentError("matmul: inner dims mismatch");
    Matrix c(a.rows(), b.cols());
    const index_t m = a.rows(), k = a.cols(), n = b.cols();
    for (index_t j = 0; j < n; ++j) {
        const double* bcol = b.col(j);
        double* ccol = c.col(j);
        for (index_t l = 0; l < k; ++l) {
            const double blj = bcol[l];
            if (blj == 0.0) continue;
            const double* acol = a.col(l);
            for (index_t i = 0; i < m; ++i) ccol[i] += acol[i] * blj;
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw ArgumentError("matmul_tn: inner dims mismatch");
    Matrix c(a.cols(), b.cols());
    const index_t k = a.rows(), m = a.cols(), n = b.cols();
    for (index_t j = 0; j < n; ++j) {
        const double* bcol = b.col(j);
        double* ccol = c.col(j);
        for (index_t i = 0; i < m; ++i) {
            const double* acol = a.col(i);
            double acc = 0.0;
            for (index_t l = 0; l < k; ++l) acc += acol[l] * bcol[l];
            ccol[i] = acc;
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw ArgumentError("matmul_nt: inner dims mismatch");
    Matrix c(a.rows(), b.rows());
    const index_t m = a.rows(), k = a.cols(), n = b.rows();
    for (index_t l = 0; l < k; ++l) {
        const double* acol = a.col(l);
        const double* bcol = b.col(l);
        for (index_t j = 0; j < n; ++j) {
            const double bjl = bcol[j];
            if (bjl == 0.0) continue;
            double* ccol = c.col(j);
            for (index_t i = 0; i < m; ++i) ccol[i] += acol[i] * bjl;
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (index_t c = 0; c < a.cols(); ++c)
        for (index_t r = 0; r < a.rows(); ++r) t(c, r) = a(r, c);
    return t;
}

Matrix canonicalize_signs(Matrix q) {
    for (index_t c = 0; c < q.cols(); ++c) {
        double* col = q.col(c);
        double best = 0.0;
        index_t best_row = -1;
        for (index_t r = 0; r < q.rows(); ++r) {
            if (std::abs(col[r]) > best) { // strict: ties keep the lowest row
                best = std::abs(col[r]);
                best_row = r;
            }
        }
        if (best_row >= 0 && col[best_row] < 0.0)
            for (index_t r = 0; r < q.rows(); ++r) col[r] = -col[r];
    }
    return q;
}

namespace {

// Shared ordering pass: sort eigenpairs non-increasing, canonicalize
// signs, and order columns inside degenerate clusters lexicographically.
EigenPairs order_eigenpairs(std::vector<double> d, Matrix q) {
    const index_t n = q.rows();
    q = canonicalize_signs(std::move(q));

    std::vector<index_t> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), index_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](index_t a, index_t b) {
        return d[static_cast<std::size_t>(a)] > d[static_cast<std::size_t>(b)];
    });

    double max_abs = 0.0;
    for (double v : d) max_abs = std::max(max_abs, std::abs(v));
    const double cluster_tol = 1e-10 * max_abs;

    auto col_less = [&](index_t a, index_t b) {
        const double* ca = q.col(a);
        const double* cb = q.col(b);
        return std::lexicographical_compare(ca, ca + n, cb, cb + n);
    };

    std::size_t lo = 0;
    while (lo < idx.size()) {
        std::size_t hi = lo + 1;
        while (hi < idx.size() && d[static_cast<std::size_t>(idx[hi - 1])] -
                                          d[static_cast<std::size_t>(idx[hi])] <
                                      cluster_tol)
            ++hi;
        if (hi - lo > 1) std::sort(idx.begin() + lo, idx.begin() + hi, col_less);
        lo = hi;
    }

    EigenPairs out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors = Matrix(n, n);
    for (index_t c = 0; c < n; ++c) {
        const index_t src = idx[static_cast<std::size_t>(c)];
        out.values[static_cast<std::size_t>(c)] = d[static_cast<std::size_t>(src)];
        const double* from = q.col(src);
        double* to = out.vectors.col(c);
        std::copy(from, from + n, to);
    }
    return out;
}

} // namespace

EigenPairs sym_eig_all(const Matrix& a) {
    if (a.rows() != a.cols()) throw ArgumentError("sym_eig: matrix must be square");
    if (!a.all_finite()) throw DataError("sym_eig: non-finite entries");
    const index_t n = a.rows();

    double max_abs = 0.0;
    double max_asym = 0.0;
    for (index_t c = 0; c < n; ++c)
        for (index_t r = 0; r < n; ++r) {
            max_abs = std::max(max_abs, std::abs(a(r, c)));
            max_asym = std::max(max_asym, std::abs(a(r, c) - a(c, r)));
        }
    if (max_abs > 0.0 && max_asym > 1e-8 * max_abs)
        throw ArgumentError("sym_eig: matrix asymmetry " + std::to_string(max_asym) +
                            " exceeds 1e-8 relative tolerance");

    Matrix sym(n, n);
    for (index_t c = 0; c < n; ++c)
        for (index_t r = 0; r < n; ++r) sym(r, c) = 0.5 * (a(r, c) + a(c, r));

    std::vector<double> d;
    Matrix q;
    if (n <= kJacobiSizeLimit) {
        jacobi_eig(sym, q, d);
    } else {
        std::vector<double> e;
        tred2(sym, d, e);
        tql2(d, e, sym);
        q = std::move(sym);
    }

    EigenPairs pairs = order_eigenpairs(std::move(d), std::move(q));

    // Residual check || A q - lambda q || <= 1e-8 ||A||_F per pair.
    double fro = 0.0;
    for (index_t c = 0; c < n; ++c)
        for (index_t r = 0; r < n; ++r) fro += a(r, c) * a(r, c);
    fro = std::sqrt(fro);
    const double tol = 1e-8 * std::max(fro, 1e-300);
    for (index_t c = 0; c < n; ++c) {
        const double lambda = pairs.values[static_cast<std::size_t>(c)];
        const double* qc = pairs.vectors.col(c);
        double resid = 0.0;
        for (index_t r = 0; r < n; ++r) {
            double acc = 0.0;
            for (index_t l = 0; l < n; ++l)
                acc += 0.5 * (a(r, l) + a(l, r)) * qc[l];
            const double diff = acc - lambda * qc[r];
            resid += diff * diff;
        }
        if (std::sqrt(resid) > tol)
            throw NumericalError("sym_eig: residual " + std::to_string(std::sqrt(resid)) +
                                 " exceeds tolerance for eigenpair " + std::to_string(c));
    }
    return pairs;
}

EigenPairs sym_eig_topk(const Matrix& a, index_t k) {
    if (k < 1 || k > a.rows())
        throw ArgumentError("sym_eig_topk: k = " + std::to_string(k) + " out of range [1, " +
                            std::to_string(a.rows()) + "]");
    EigenPairs all = sym_eig_all(a);
    if (k == a.rows()) return all;
    EigenPairs top;
    top.values.assign(all.values.begin(), all.values.begin() + k);
    top.vectors = Matrix(a.rows(), k);
    for (index_t c = 0; c < k; ++c) {
        const double* from = all.vectors.col(c);
        std::copy(from, from + a.rows(), top.vectors.col(c));
    }
    return top;
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw ArgumentError("khatri_rao: column counts differ, " + std::to_string(a.cols()) +
                            " vs " + std::to_string(b.cols()));
    const index_t ra = a.rows(), rb = b.rows(), r = a.cols();
    Matrix k(ra * rb, r);
    for (index_t c = 0; c < r; ++c) {
        const double* ac = a.col(c);
        const double* bc = b.col(c);
        double* kc = k.col(c);
        std::size_t pos = 0;
        for (index_t ia = 0; ia < ra; ++ia) {
            const double av = ac[ia];
            for (index_t ib = 0; ib < rb; ++ib) kc[pos++] = av * bc[ib];
        }
    }
    return k;
}

Matrix solve_least_squares(const Matrix& z, const Matrix& y) {
    if (z.rows() != y.rows())
        throw ArgumentError("solve_least_squares: Z and Y row counts differ, " +
                            std::to_string(z.rows()) + " vs " + std::to_string(y.rows()));
    const index_t r = z.cols();
    Matrix ata = matmul_tn(z, z); // R x R
    double trace = 0.0;
    for (index_t i = 0; i < r; ++i) trace += ata(i, i);
    if (trace == 0.0) return Matrix(y.cols(), r); // Z == 0: minimum-norm minimizer
    const double ridge = 1e-12 * trace / static_cast<double>(r);
    for (index_t i = 0; i < r; ++i) ata(i, i) += ridge;

    // In-place Cholesky A = L L^T (lower triangle).
    double max_diag = 0.0;
    for (index_t i = 0; i < r; ++i) max_diag = std::max(max_diag, ata(i, i));
    for (index_t c = 0; c < r; ++c) {
        for (index_t rr = c; rr < r; ++rr) {
            double acc = ata(rr, c);
            for (index_t kk = 0; kk < c; ++kk) acc -= ata(rr, kk) * ata(c, kk);
            if (rr == c) {
                if (acc <= 0.0 || !std::isfinite(acc))
                    throw NumericalError(
                        "solve_least_squares: normal equations not positive definite "
                        "(pivot " + std::to_string(acc) + " at column " + std::to_string(c) +
                        ", condition estimate " +
                        std::to_string(max_diag / std::max(acc, 1e-300)) + ")");
                ata(rr, c) = std::sqrt(acc);
            } else {
                ata(rr, c) = acc / ata(c, c);
            }
        }
    }

    Matrix rhs = matmul_tn(z, y); // R x M
    const index_t m = rhs.cols();
    // Forward then backward substitution per right-hand side.
    for (index_t j = 0; j < m; ++j) {
        double* x = rhs.col(j);
        for (index_t i = 0; i < r; ++i) {
            double acc = x[i];
            for (index_t kk = 0; kk < i; ++kk) acc -= ata(i, kk) * x[kk];
            x[i] = acc / ata(i, i);
        }
        for (index_t i = r - 1; i >= 0; --i) {
            double acc = x[i];
            for (index_t kk = i + 1; kk < r; ++kk) acc -= ata(kk, i) * x[kk];
            x[i] = acc / ata(i, i);
        }
    }
    return transpose(rhs); // M x R
}

} // namespace triax
