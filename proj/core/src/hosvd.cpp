#include "triax/hosvd.hpp"

#include <string>

#include "triax/errors.hpp"

namespace triax {

namespace {

// Gram of the mode-1 unfolding: the tensor buffer already is the
// column-major n1 x (n2*n3) unfolding, so this is one matmul_nt.
Matrix mode1_gram(const Tensor3& t) {
    const Matrix m(t.n1(), t.n2() * t.n3(),
                   std::vector<double>(t.values().begin(), t.values().end()));
    return matmul_nt(m, m);
}

Matrix mode_gram(const Tensor3& t, int mode) {
    if (mode == 1) return mode1_gram(t);
    const Matrix m = unfold(t, mode);
    return matmul_nt(m, m);
}

} // namespace

Matrix compute_F(const Tensor3& x, const Matrix& v, const Matrix& w) {
    if (v.rows() != x.n2() || w.rows() != x.n3())
        throw ArgumentError("compute_F: V/W row counts must match tensor dims 2/3");
    const Tensor3 t = mode_multiply(mode_multiply(x, v, 2, true), w, 3, true);
    return mode_gram(t, 1);
}

Matrix compute_G(const Tensor3& x, const Matrix& u, const Matrix& w) {
    if (u.rows() != x.n1() || w.rows() != x.n3())
        throw ArgumentError("compute_G: U/W row counts must match tensor dims 1/3");
    const Tensor3 t = mode_multiply(mode_multiply(x, u, 1, true), w, 3, true);
    return mode_gram(t, 2);
}

Matrix compute_H(const Tensor3& x, const Matrix& u, const Matrix& v) {
    if (u.rows() != x.n1() || v.rows() != x.n2())
        throw ArgumentError("compute_H: U/V row counts must match tensor dims 1/2");
    const Tensor3 t = mode_multiply(mode_multiply(x, u, 1, true), v, 2, true);
    return mode_gram(t, 3);
}

CoreTensor core_tensor(const Tensor3& x, const Matrix& u, const Matrix& v, const Matrix& w) {
    if (u.rows() != x.n1() || v.rows() != x.n2() || w.rows() != x.n3())
        throw ArgumentError("core_tensor: factor row counts must match tensor dims");
    Tensor3 s = mode_multiply(x, u, 1, true);
    s = mode_multiply(s, v, 2, true);
    return mode_multiply(s, w, 3, true);
}

double hosvd_objective(const Tensor3& x, const CoreTensor& s) {
    return frobenius_norm_sq(x) - frobenius_norm_sq(s);
}

std::pair<HosvdModel, HosvdTrace> hosvd_run(const Tensor3& x, TargetDims dims, const Matrix& v0,
                                            const Matrix& w0, int iterations,
                                            const HosvdOptions& options) {
    const index_t n1 = x.n1(), n2 = x.n2(), n3 = x.n3();
    if (dims.m1 < 1 || dims.m1 > n1 || dims.m2 < 1 || dims.m2 > n2 || dims.m3 < 1 ||
        dims.m3 > n3)
        throw ArgumentError("hosvd_run: target dims (" + std::to_string(dims.m1) + ", " +
                            std::to_string(dims.m2) + ", " + std::to_string(dims.m3) +
                            ") must satisfy 1 <= m_i <= n_i for tensor (" + std::to_string(n1) +
                            ", " + std::to_string(n2) + ", " + std::to_string(n3) + ")");
    if (v0.rows() != n2 || v0.cols() != dims.m2)
        throw ArgumentError("hosvd_run: V0 must be n2 x m2");
    if (w0.rows() != n3 || w0.cols() != dims.m3)
        throw ArgumentError("hosvd_run: W0 must be n3 x m3");
    if (iterations < 1) throw ArgumentError("hosvd_run: iterations must be >= 1");

    Matrix u(n1, dims.m1);
    Matrix v = v0;
    Matrix w = w0;

    HosvdTrace trace;
    trace.core_norm_sq.reserve(static_cast<std::size_t>(iterations));
    if (options.record_snapshots)
        trace.snapshots.reserve(static_cast<std::size_t>(iterations));

    auto top_vectors = [&](const Matrix& quad, index_t k, const char* which, int t) {
        try {
            return sym_eig_topk(quad, k).vectors;
        } catch (const NumericalError& e) {
            throw NumericalError("hosvd_run: eigensolver failed updating " + std::string(which) +
                                 " at iteration " + std::to_string(t) + ": " + e.what());
        }
    };

    for (int t = 0; t < iterations; ++t) {
        u = top_vectors(compute_F(x, v, w), dims.m1, "U", t);
        v = top_vectors(compute_G(x, u, w), dims.m2, "V", t);
        w = top_vectors(compute_H(x, u, v), dims.m3, "W", t);
        const CoreTensor s = core_tensor(x, u, v, w);
        trace.core_norm_sq.push_back(frobenius_norm_sq(s));
        if (options.record_snapshots) trace.snapshots.push_back(FactorSnapshot{u, v, w});
    }

    CoreTensor s = core_tensor(x, u, v, w);
    HosvdModel model{std::move(u), std::move(v), std::move(w), std::move(s)};
    return {std::move(model), std::move(trace)};
}

} // namespace triax
