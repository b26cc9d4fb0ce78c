#include <random>

#include <benchmark/benchmark.h>

#include "cgd/linalg.hpp"
#include "cgd/random.hpp"

namespace {

cgd::SymMatrix random_sym(std::size_t d) {
    std::mt19937_64 rng(d);
    return cgd::SymMatrix::generate(d, [&](std::size_t, std::size_t) { return cgd::uniform(rng, -1.0, 1.0); });
}

void BM_Eigendecompose(benchmark::State& state, cgd::EigenSolver solver) {
    const auto a = random_sym(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cgd::eigendecompose(a, solver));
}

void BM_Eigenvalues(benchmark::State& state) {
    const auto a = random_sym(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cgd::eigenvalues(a));
}

void BM_ApplyInverseMetric(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto eig = cgd::eigendecompose(random_sym(d));
    const cgd::Vector force(d, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(cgd::apply_inverse_metric(eig, 0.4, 1e-8, force));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Eigendecompose, jacobi, cgd::EigenSolver::Jacobi)
    ->Arg(8)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Eigendecompose, tridiagonal, cgd::EigenSolver::Tridiagonal)
    ->Arg(8)->Arg(32)->Arg(64)->Arg(128)->Arg(552)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Eigenvalues)->Arg(64)->Arg(552)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ApplyInverseMetric)->Arg(64)->Arg(552)->Unit(benchmark::kMicrosecond);
