#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "triax/hosvd.hpp"
#include "triax/parafac.hpp"
#include "triax/t1.hpp"
#include "triax/tensor.hpp"

namespace triax {

enum class Algorithm { Hosvd, Parafac };
enum class Verdict { Unique, NonUnique, Indeterminate };

std::string to_string(Algorithm a);
std::string to_string(Verdict v);

struct AuditConfig {
    Algorithm algorithm = Algorithm::Hosvd;
    TargetDims dims{};      // HOSVD target dims
    index_t rank = 0;       // ParaFac factor count
    int tests = 10;
    int iterations = 0;     // 0 resolves to the default: 100 HOSVD, 2000 ParaFac
    double epsilon = 1e-8;  // relative uniqueness threshold
    std::uint64_t master_seed = 0;
    int jobs = 1;
    // Self-test hook: replace all seven starts with R1 (d must be 0).
    bool force_identical_starts = false;
    index_t snapshot_memory_limit = 1'000'000;

    int resolved_iterations() const {
        if (iterations > 0) return iterations;
        return algorithm == Algorithm::Hosvd ? 100 : 2000;
    }
};

struct TestResult {
    std::uint64_t bundle_seed = 0;
    std::vector<double> d_series;                      // length T
    std::vector<std::vector<double>> objective_traces; // 7 x T
    double final_d = 0.0;
    bool failed = false;
    std::string failure;
    double wall_seconds = 0.0;
};

struct AuditReport {
    AuditConfig config;
    index_t dims_n1 = 0, dims_n2 = 0, dims_n3 = 0;
    double tensor_norm = 0.0; // ||X||_F
    double scale = 0.0;       // epsilon normalization, see run_audit
    bool r1_padded = false;
    std::vector<TestResult> per_test;
    Verdict verdict = Verdict::Indeterminate;
    double total_seconds = 0.0;

    double threshold() const { return config.epsilon * scale; }
};

// d(t): mean over starts 2..7 of the summed Frobenius factor
// differences against start 1 at the same iteration.
double hosvd_distance(const std::vector<FactorSnapshot>& starts);

// d'(t): mean over starts 2..7 of || X_hat_i - X_hat_1 ||_F.
double parafac_distance(const std::vector<Tensor3>& reconstructions);

// Verdict rule: any failed test -> INDETERMINATE; otherwise UNIQUE iff
// every test's final d is below epsilon * scale.
Verdict decide_verdict(const std::vector<TestResult>& tests, double threshold);

// The multi-start uniqueness experiment: per test a fresh seven-start
// bundle (seed derive_seed(master_seed, test_index)), seven solver runs,
// and the d-series of length T. The scale is ||X||_F * sqrt(n1*m1 +
// n2*m2 + n3*m3) for HOSVD factor distances and ||X||_F for ParaFac
// reconstruction distances. Tests run concurrently up to config.jobs;
// the report is identical regardless of scheduling.
AuditReport run_audit(const Tensor3& x, const AuditConfig& config);

} // namespace triax
