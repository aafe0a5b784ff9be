#pragma once

#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "triax/tensor.hpp"

namespace triax {

struct ParafacModel {
    Matrix u; // n1 x R
    Matrix v; // n2 x R
    Matrix w; // n3 x R
    index_t rank() const { return u.cols(); }
};

// Per-iteration reconstruction frames. Frames of tensors up to
// `memory_limit` entries are kept in RAM; larger ones stream to a
// temporary file that is removed on destruction.
class SnapshotStore {
public:
    SnapshotStore(index_t n1, index_t n2, index_t n3, index_t memory_limit,
                  std::filesystem::path spill_dir = {});
    ~SnapshotStore();

    SnapshotStore(const SnapshotStore&) = delete;
    SnapshotStore& operator=(const SnapshotStore&) = delete;

    void append(const Tensor3& frame);
    Tensor3 frame(index_t t) const;
    // || other - frame(t) ||_F without materializing a copy when the
    // store is memory-backed.
    double frame_l2_distance(index_t t, const Tensor3& other) const;
    index_t frames() const { return count_; }
    bool on_disk() const { return disk_; }

private:
    index_t n1_, n2_, n3_;
    index_t entries_;
    index_t count_ = 0;
    bool disk_;
    std::vector<double> mem_;
    std::filesystem::path path_;
    mutable std::FILE* file_ = nullptr;
};

struct ParafacTrace {
    std::vector<double> objective; // ||X - X_hat||^2 after each sweep
    std::shared_ptr<SnapshotStore> reconstructions; // set when recorded
};

struct ParafacOptions {
    bool record_reconstructions = false;
    index_t snapshot_memory_limit = 1'000'000; // entries per frame
    std::filesystem::path spill_dir = {};      // empty: std temp dir
    // Called after each sweep with the iteration index and X_hat^t.
    std::function<void(int, const Tensor3&)> on_iteration = {};
};

// J_ParaFac = || X - sum_r u_r o v_r o w_r ||^2.
double parafac_objective(const Tensor3& x, const ParafacModel& model);

// Closed-form ALS update of one factor with the other two fixed
// (Khatri-Rao + ridge-stabilized least squares). which is 'U', 'V' or 'W'.
Matrix update_factor(const Tensor3& x, const ParafacModel& model, char which);

// T sweeps of U -> V -> W updates from (V0, W0); the initial U is unused.
// No column normalization between sweeps; any factor entry exceeding
// 1e150 in magnitude raises NumericalError naming the factor and
// iteration. Deterministic given (X, V0, W0, T).
std::pair<ParafacModel, ParafacTrace> parafac_run(const Tensor3& x, index_t rank,
                                                  const Matrix& v0, const Matrix& w0,
                                                  int iterations,
                                                  const ParafacOptions& options = {});

} // namespace triax
