#include "triax/parafac.hpp"

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstring>
#include <string>

#include "triax/errors.hpp"
#include "triax/linalg.hpp"

namespace triax {

namespace {

constexpr double kOverflowLimit = 1e150;

std::filesystem::path unique_spill_path(const std::filesystem::path& dir) {
    static std::atomic<std::uint64_t> counter{0};
    const std::filesystem::path base = dir.empty() ? std::filesystem::temp_directory_path() : dir;
    const std::uint64_t id = counter.fetch_add(1);
    return base / ("triax-snapshots-" + std::to_string(static_cast<unsigned long>(getpid())) +
                   "-" + std::to_string(id) + ".bin");
}

void check_overflow(const Matrix& factor, char which, int iteration) {
    for (double x : factor.values()) {
        if (!(std::abs(x) <= kOverflowLimit))
            throw NumericalError(std::string("parafac: factor ") + which + " overflowed (|entry| > 1e150) at iteration " +
                                 std::to_string(iteration));
    }
}

// The three ALS subproblems share one shape: factor = argmin_B
// || unfold_m(X)^T - khatri_rao(A, C) B^T ||_F with the row layouts of
// tensor.hpp: mode 1 pairs (W, V), mode 2 pairs (U, W), mode 3 pairs (V, U).
Matrix solve_mode(const Matrix& y_t, const Matrix& slow, const Matrix& fast) {
    return solve_least_squares(khatri_rao(slow, fast), y_t);
}

} // namespace

SnapshotStore::SnapshotStore(index_t n1, index_t n2, index_t n3, index_t memory_limit,
                             std::filesystem::path spill_dir)
    : n1_(n1), n2_(n2), n3_(n3), entries_(n1 * n2 * n3), disk_(entries_ > memory_limit) {
    if (disk_) {
        path_ = unique_spill_path(spill_dir);
        file_ = std::fopen(path_.string().c_str(), "w+b");
        if (!file_) throw DataError("SnapshotStore: cannot open spill file " + path_.string());
    }
}

SnapshotStore::~SnapshotStore() {
    if (file_) {
        std::fclose(file_);
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
}

void SnapshotStore::append(const Tensor3& frame) {
    if (frame.n1() != n1_ || frame.n2() != n2_ || frame.n3() != n3_)
        throw ArgumentError("SnapshotStore: frame dims mismatch");
    if (disk_) {
        if (std::fseek(file_, 0, SEEK_END) != 0 ||
            std::fwrite(frame.data(), sizeof(double), static_cast<std::size_t>(entries_),
                        file_) != static_cast<std::size_t>(entries_))
            throw DataError("SnapshotStore: short write to " + path_.string());
    } else {
        mem_.insert(mem_.end(), frame.values().begin(), frame.values().end());
    }
    ++count_;
}

Tensor3 SnapshotStore::frame(index_t t) const {
    if (t < 0 || t >= count_) throw ArgumentError("SnapshotStore: frame index out of range");
    std::vector<double> buf(static_cast<std::size_t>(entries_));
    if (disk_) {
        if (std::fseek(file_, static_cast<long>(t * entries_ * static_cast<index_t>(sizeof(double))),
                       SEEK_SET) != 0 ||
            std::fread(buf.data(), sizeof(double), buf.size(), file_) != buf.size())
            throw DataError("SnapshotStore: short read from " + path_.string());
    } else {
        const double* src = mem_.data() + t * entries_;
        std::memcpy(buf.data(), src, sizeof(double) * buf.size());
    }
    return Tensor3(n1_, n2_, n3_, std::move(buf));
}

double SnapshotStore::frame_l2_distance(index_t t, const Tensor3& other) const {
    if (other.n1() != n1_ || other.n2() != n2_ || other.n3() != n3_)
        throw ArgumentError("SnapshotStore: tensor dims mismatch");
    const double* b = other.data();
    double acc = 0.0;
    if (disk_) {
        const Tensor3 f = frame(t);
        const double* a = f.data();
        for (index_t i = 0; i < entries_; ++i) {
            const double d = b[i] - a[i];
            acc += d * d;
        }
    } else {
        if (t < 0 || t >= count_) throw ArgumentError("SnapshotStore: frame index out of range");
        const double* a = mem_.data() + t * entries_;
        for (index_t i = 0; i < entries_; ++i) {
            const double d = b[i] - a[i];
            acc += d * d;
        }
    }
    return std::sqrt(acc);
}

double parafac_objective(const Tensor3& x, const ParafacModel& model) {
    if (model.u.rows() != x.n1() || model.v.rows() != x.n2() || model.w.rows() != x.n3())
        throw ArgumentError("parafac_objective: factor rows must match tensor dims");
    if (model.v.cols() != model.rank() || model.w.cols() != model.rank())
        throw ArgumentError("parafac_objective: factors must share the column count");
    const Tensor3 xhat = reconstruct_parafac(model.u, model.v, model.w);
    double acc = 0.0;
    const double* a = x.data();
    const double* b = xhat.data();
    const index_t n = x.size();
    for (index_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

Matrix update_factor(const Tensor3& x, const ParafacModel& model, char which) {
    switch (which) {
    case 'U': return solve_mode(transpose(unfold(x, 1)), model.w, model.v);
    case 'V': return solve_mode(transpose(unfold(x, 2)), model.u, model.w);
    case 'W': return solve_mode(transpose(unfold(x, 3)), model.v, model.u);
    default: throw ArgumentError("update_factor: which must be 'U', 'V' or 'W'");
    }
}

std::pair<ParafacModel, ParafacTrace> parafac_run(const Tensor3& x, index_t rank,
                                                  const Matrix& v0, const Matrix& w0,
                                                  int iterations, const ParafacOptions& options) {
    if (rank < 1) throw ArgumentError("parafac_run: rank must be >= 1");
    if (iterations < 1) throw ArgumentError("parafac_run: iterations must be >= 1");
    if (v0.rows() != x.n2() || v0.cols() != rank)
        throw ArgumentError("parafac_run: V0 must be n2 x R");
    if (w0.rows() != x.n3() || w0.cols() != rank)
        throw ArgumentError("parafac_run: W0 must be n3 x R");

    // The unfoldings of X are iteration-invariant; build them once.
    const Matrix y1 = transpose(unfold(x, 1));
    const Matrix y2 = transpose(unfold(x, 2));
    const Matrix y3 = transpose(unfold(x, 3));

    ParafacModel model{Matrix(x.n1(), rank), v0, w0};

    ParafacTrace trace;
    trace.objective.reserve(static_cast<std::size_t>(iterations));
    if (options.record_reconstructions)
        trace.reconstructions = std::make_shared<SnapshotStore>(
            x.n1(), x.n2(), x.n3(), options.snapshot_memory_limit, options.spill_dir);

    auto run_update = [&](const Matrix& y_t, const Matrix& slow, const Matrix& fast, char which,
                          int t) {
        Matrix out;
        try {
            out = solve_mode(y_t, slow, fast);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string("parafac_run: least-squares failed updating ") +
                                 which + " at iteration " + std::to_string(t) + ": " + e.what());
        }
        check_overflow(out, which, t);
        return out;
    };

    for (int t = 0; t < iterations; ++t) {
        model.u = run_update(y1, model.w, model.v, 'U', t);
        model.v = run_update(y2, model.u, model.w, 'V', t);
        model.w = run_update(y3, model.v, model.u, 'W', t);

        const Tensor3 xhat = reconstruct_parafac(model.u, model.v, model.w);
        double acc = 0.0;
        const double* a = x.data();
        const double* b = xhat.data();
        for (index_t i = 0; i < x.size(); ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
        trace.objective.push_back(acc);
        if (trace.reconstructions) trace.reconstructions->append(xhat);
        if (options.on_iteration) options.on_iteration(t, xhat);
    }
    return {std::move(model), std::move(trace)};
}

} // namespace triax
