// Cost of one optimizer step on the 552-parameter network, per preset.

#include <benchmark/benchmark.h>

#include "cgd/optimizer.hpp"
#include "cgd/problems.hpp"

namespace {

void BM_MultiplyStep(benchmark::State& state, cgd::Preset p) {
    const cgd::MultiplyProblem problem(100, 0);
    const cgd::CgdConfig cfg = cgd::preset(p, cgd::Suite::Multiply);
    cgd::OptimizerState s = cgd::OptimizerState::initial(cgd::UnconstrainedNet::initial_params(0), cfg);
    std::uint64_t t = 0;
    for (auto _ : state) {
        const auto lg = problem.loss_and_gradient(s.params, ++t);
        s = cgd::step(s, lg.gradient, cfg);
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_MultiplyStep, adam, cgd::Preset::Adam)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MultiplyStep, cgd_diagonal, cgd::Preset::CgdDiagonal)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MultiplyStep, cgd_full, cgd::Preset::CgdFull)->Unit(benchmark::kMillisecond);
