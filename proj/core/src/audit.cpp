#include "triax/audit.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "triax/errors.hpp"
#include "triax/rng.hpp"

namespace triax {

namespace {

double frobenius_diff(const Matrix& a, const Matrix& b) {
    double acc = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    const index_t n = a.size();
    for (index_t i = 0; i < n; ++i) {
        const double d = pa[i] - pb[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double frobenius_diff(const Tensor3& a, const Tensor3& b) {
    double acc = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    const index_t n = a.size();
    for (index_t i = 0; i < n; ++i) {
        const double d = pa[i] - pb[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

void validate_config(const Tensor3& x, const AuditConfig& config) {
    if (config.tests < 1) throw ArgumentError("audit: tests must be >= 1");
    if (config.resolved_iterations() < 1) throw ArgumentError("audit: iterations must be >= 1");
    if (!(config.epsilon > 0.0)) throw ArgumentError("audit: epsilon must be positive");
    if (config.jobs < 1) throw ArgumentError("audit: jobs must be >= 1");
    if (config.algorithm == Algorithm::Hosvd) {
        if (config.dims.m1 < 1 || config.dims.m1 > x.n1() || config.dims.m2 < 1 ||
            config.dims.m2 > x.n2() || config.dims.m3 < 1 || config.dims.m3 > x.n3())
            throw ArgumentError("audit: HOSVD dims must satisfy 1 <= m_i <= n_i");
    } else {
        if (config.rank < 1) throw ArgumentError("audit: ParaFac rank must be >= 1");
    }
}

struct TestContext {
    const Tensor3& x;
    const AuditConfig& config;
    int iterations;
};

TestResult run_hosvd_test(const TestContext& ctx, int test_index) {
    const AuditConfig& cfg = ctx.config;
    TestResult result;
    result.bundle_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(test_index));

    InitBundle bundle = make_init_bundle(ctx.x, cfg.dims.m2, cfg.dims.m3, result.bundle_seed);
    if (cfg.force_identical_starts)
        for (int i = 1; i < 7; ++i) {
            bundle.starts[static_cast<std::size_t>(i)].v0 = bundle.starts[0].v0;
            bundle.starts[static_cast<std::size_t>(i)].w0 = bundle.starts[0].w0;
        }

    const int t_count = ctx.iterations;
    std::vector<HosvdTrace> traces;
    traces.reserve(7);
    for (const InitStart& start : bundle.starts) {
        auto [model, trace] =
            hosvd_run(ctx.x, cfg.dims, start.v0, start.w0, t_count, {.record_snapshots = true});
        (void)model;
        result.objective_traces.push_back(trace.core_norm_sq);
        traces.push_back(std::move(trace));
    }

    result.d_series.resize(static_cast<std::size_t>(t_count));
    std::vector<FactorSnapshot> at_t(7);
    for (int t = 0; t < t_count; ++t) {
        for (int i = 0; i < 7; ++i)
            at_t[static_cast<std::size_t>(i)] =
                traces[static_cast<std::size_t>(i)].snapshots[static_cast<std::size_t>(t)];
        result.d_series[static_cast<std::size_t>(t)] = hosvd_distance(at_t);
    }
    result.final_d = result.d_series.back();
    return result;
}

TestResult run_parafac_test(const TestContext& ctx, int test_index) {
    const AuditConfig& cfg = ctx.config;
    TestResult result;
    result.bundle_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(test_index));

    InitBundle bundle = make_init_bundle(ctx.x, cfg.rank, cfg.rank, result.bundle_seed,
                                         /*allow_overcomplete=*/true);
    if (cfg.force_identical_starts)
        for (int i = 1; i < 7; ++i) {
            bundle.starts[static_cast<std::size_t>(i)].v0 = bundle.starts[0].v0;
            bundle.starts[static_cast<std::size_t>(i)].w0 = bundle.starts[0].w0;
        }

    const int t_count = ctx.iterations;
    result.d_series.assign(static_cast<std::size_t>(t_count), 0.0);

    // Start 1 keeps its reconstructions (in memory below the snapshot
    // limit, on disk above); starts 2..7 stream their contribution.
    ParafacOptions first_options;
    first_options.record_reconstructions = true;
    first_options.snapshot_memory_limit = cfg.snapshot_memory_limit;
    auto [first_model, first_trace] = parafac_run(ctx.x, cfg.rank, bundle.starts[0].v0,
                                                  bundle.starts[0].w0, t_count, first_options);
    (void)first_model;
    result.objective_traces.push_back(first_trace.objective);
    const SnapshotStore& reference = *first_trace.reconstructions;

    for (int i = 1; i < 7; ++i) {
        ParafacOptions options;
        options.on_iteration = [&](int t, const Tensor3& xhat) {
            result.d_series[static_cast<std::size_t>(t)] +=
                reference.frame_l2_distance(t, xhat) / 6.0;
        };
        auto [model, trace] = parafac_run(ctx.x, cfg.rank, bundle.starts[static_cast<std::size_t>(i)].v0,
                                          bundle.starts[static_cast<std::size_t>(i)].w0, t_count,
                                          options);
        (void)model;
        result.objective_traces.push_back(trace.objective);
    }
    result.final_d = result.d_series.back();
    return result;
}

} // namespace

std::string to_string(Algorithm a) { return a == Algorithm::Hosvd ? "hosvd" : "parafac"; }

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Unique: return "UNIQUE";
    case Verdict::NonUnique: return "NON_UNIQUE";
    case Verdict::Indeterminate: return "INDETERMINATE";
    }
    return "?";
}

double hosvd_distance(const std::vector<FactorSnapshot>& starts) {
    if (starts.size() != 7)
        throw ArgumentError("hosvd_distance: expected 7 per-start snapshots, got " +
                            std::to_string(starts.size()));
    const FactorSnapshot& ref = starts[0];
    double acc = 0.0;
    for (std::size_t i = 1; i < starts.size(); ++i) {
        const FactorSnapshot& s = starts[i];
        if (s.u.rows() != ref.u.rows() || s.u.cols() != ref.u.cols() ||
            s.v.rows() != ref.v.rows() || s.v.cols() != ref.v.cols() ||
            s.w.rows() != ref.w.rows() || s.w.cols() != ref.w.cols())
            throw NumericalError("hosvd_distance: snapshot shape mismatch across starts "
                                 "(solver bug)");
        acc += frobenius_diff(s.u, ref.u) + frobenius_diff(s.v, ref.v) +
               frobenius_diff(s.w, ref.w);
    }
    return acc / 6.0;
}

double parafac_distance(const std::vector<Tensor3>& reconstructions) {
    if (reconstructions.size() != 7)
        throw ArgumentError("parafac_distance: expected 7 reconstructions, got " +
                            std::to_string(reconstructions.size()));
    const Tensor3& ref = reconstructions[0];
    double acc = 0.0;
    for (std::size_t i = 1; i < reconstructions.size(); ++i) {
        const Tensor3& r = reconstructions[i];
        if (r.n1() != ref.n1() || r.n2() != ref.n2() || r.n3() != ref.n3())
            throw NumericalError("parafac_distance: reconstruction shape mismatch across "
                                 "starts (solver bug)");
        acc += frobenius_diff(r, ref);
    }
    return acc / 6.0;
}

Verdict decide_verdict(const std::vector<TestResult>& tests, double threshold) {
    bool all_below = true;
    for (const TestResult& t : tests) {
        if (t.failed) return Verdict::Indeterminate;
        if (!(t.final_d < threshold)) all_below = false;
    }
    return all_below ? Verdict::Unique : Verdict::NonUnique;
}

AuditReport run_audit(const Tensor3& x, const AuditConfig& config) {
    if (!x.all_finite()) throw DataError("audit: tensor has non-finite entries");
    validate_config(x, config);

    AuditReport report;
    report.config = config;
    report.config.iterations = config.resolved_iterations();
    report.dims_n1 = x.n1();
    report.dims_n2 = x.n2();
    report.dims_n3 = x.n3();
    report.tensor_norm = frobenius_norm(x);

    if (config.algorithm == Algorithm::Hosvd) {
        const double entries = static_cast<double>(x.n1() * config.dims.m1 +
                                                   x.n2() * config.dims.m2 +
                                                   x.n3() * config.dims.m3);
        report.scale = report.tensor_norm * std::sqrt(entries);
    } else {
        report.scale = report.tensor_norm;
        report.r1_padded = config.rank > x.n3() || config.rank > x.n2();
    }

    const auto start_time = std::chrono::steady_clock::now();
    TestContext ctx{x, config, report.config.iterations};

    report.per_test.resize(static_cast<std::size_t>(config.tests));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= config.tests) return;
            TestResult& slot = report.per_test[static_cast<std::size_t>(idx)];
            const auto t0 = std::chrono::steady_clock::now();
            try {
                slot = config.algorithm == Algorithm::Hosvd ? run_hosvd_test(ctx, idx)
                                                            : run_parafac_test(ctx, idx);
            } catch (const NumericalError& e) {
                slot = TestResult{};
                slot.bundle_seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(idx));
                slot.failed = true;
                slot.failure = e.what();
            }
            slot.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };

    const int threads = std::min(config.jobs, config.tests);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    report.verdict = decide_verdict(report.per_test, report.threshold());
    report.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return report;
}

} // namespace triax
