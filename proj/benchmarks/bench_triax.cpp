#include <benchmark/benchmark.h>

#include "triax/audit.hpp"
#include "triax/hosvd.hpp"
#include "triax/io.hpp"
#include "triax/linalg.hpp"
#include "triax/parafac.hpp"
#include "triax/t1.hpp"
#include "triax/tensor.hpp"

using namespace triax;

namespace {

void BM_ModeMultiplyContract(benchmark::State& state) {
    const index_t n = state.range(0);
    const Tensor3 x = gen_random_tensor(n, n, n, 1);
    const Matrix m = random_orthonormal(n, 5, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mode_multiply(x, m, 2, true));
    }
}
BENCHMARK(BM_ModeMultiplyContract)->Arg(20)->Arg(30)->Arg(50);

void BM_Unfold(benchmark::State& state) {
    const index_t n = state.range(0);
    const Tensor3 x = gen_random_tensor(n, n, n, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(unfold(x, 2));
    }
}
BENCHMARK(BM_Unfold)->Arg(30)->Arg(50);

void BM_SymEigJacobi(benchmark::State& state) {
    const index_t n = state.range(0);
    const Tensor3 x = gen_random_tensor(n, n, 2, 5);
    const Matrix m = unfold(x, 1);
    const Matrix a = matmul_nt(m, m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sym_eig_all(a));
    }
}
BENCHMARK(BM_SymEigJacobi)->Arg(16)->Arg(32)->Arg(64);

void BM_SymEigQL(benchmark::State& state) {
    const index_t n = state.range(0);
    const Tensor3 x = gen_random_tensor(n, n, 2, 7);
    const Matrix m = unfold(x, 1);
    const Matrix a = matmul_nt(m, m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sym_eig_all(a));
    }
}
BENCHMARK(BM_SymEigQL)->Arg(80)->Arg(128);

void BM_KhatriRao(benchmark::State& state) {
    const index_t n = state.range(0);
    const Matrix a = random_orthonormal(n, 5, 11);
    const Matrix b = random_orthonormal(n, 5, 13);
    for (auto _ : state) {
        benchmark::DoNotOptimize(khatri_rao(a, b));
    }
}
BENCHMARK(BM_KhatriRao)->Arg(30)->Arg(100);

void BM_HosvdSweep(benchmark::State& state) {
    const index_t n = state.range(0);
    const Tensor3 x = gen_random_tensor(n, n, n, 17);
    const InitBundle bundle = make_init_bundle(x, 5, 5, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            hosvd_run(x, {5, 5, 5}, bundle.starts[1].v0, bundle.starts[1].w0, 1));
    }
}
BENCHMARK(BM_HosvdSweep)->Arg(20)->Arg(30);

void BM_ParafacSweep(benchmark::State& state) {
    const index_t n = state.range(0);
    const Tensor3 x = gen_random_tensor(n, n, n, 19);
    const InitBundle bundle = make_init_bundle(x, 5, 5, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            parafac_run(x, 5, bundle.starts[1].v0, bundle.starts[1].w0, 1));
    }
}
BENCHMARK(BM_ParafacSweep)->Arg(20)->Arg(30);

void BM_T1Solve(benchmark::State& state) {
    const index_t n = state.range(0);
    const Tensor3 x = gen_random_tensor(n, n, n, 23);
    for (auto _ : state) {
        benchmark::DoNotOptimize(t1_solve(x, 5));
    }
}
BENCHMARK(BM_T1Solve)->Arg(20)->Arg(40);

} // namespace

BENCHMARK_MAIN();
