// Per-iteration cost of the proximity-operator iteration, dense A versus matrix-free.
// A dense iteration costs O(q²); the matrix-free one costs O(np) plus fast transforms.

#include <benchmark/benchmark.h>

#include "dantzig/experiments.hpp"
#include "dantzig/rng.hpp"
#include "dantzig/solver.hpp"

namespace {

using namespace dantzig;

Precomputed<Complex> exp2_problem(int m, ApplyMode mode) {
  const auto shape = shape_of(2, m);
  const Dictionary b({TransformBlock::identity(shape.p), TransformBlock::dft(shape.p)});
  auto x = gaussian_sensing(shape.n, shape.p, derive_seed(7, 0, Stream::Sensing));
  const RealVec c = gen_exp2_coeffs(shape.p, shape.s, derive_seed(7, 0, Stream::Signal));
  const ComplexVec beta = b.apply<Complex>(c.cast<Complex>());
  ComplexVec y = observe<Complex>(x, beta, NoiseSpec{0.01, derive_seed(7, 0, Stream::Noise)});
  return assemble<Complex>(
      Problem<Complex>{std::move(x), b, std::move(y), default_delta(0.01, 2 * shape.p)},
      AssemblyOptions{.mode = mode});
}

void run_steps(benchmark::State& state, ApplyMode mode) {
  const auto pre = exp2_problem(static_cast<int>(state.range(0)), mode);
  SolverConfig cfg;
  cfg.alpha = balanced_alpha(pre);
  auto s = SolverState<Complex>::zero(pre.size());
  for (auto _ : state) {
    step(s, pre, cfg);
    benchmark::DoNotOptimize(s.c.data());
  }
  state.counters["q"] = static_cast<double>(pre.size());
}

void BM_PoaStepDense(benchmark::State& state) { run_steps(state, ApplyMode::Dense); }
void BM_PoaStepMatrixFree(benchmark::State& state) { run_steps(state, ApplyMode::MatrixFree); }

BENCHMARK(BM_PoaStepDense)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PoaStepMatrixFree)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_Assemble(benchmark::State& state) {
  for (auto _ : state) {
    auto pre = exp2_problem(static_cast<int>(state.range(0)), ApplyMode::MatrixFree);
    benchmark::DoNotOptimize(pre.a_norm());
  }
}
BENCHMARK(BM_Assemble)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SolveExp2(benchmark::State& state) {
  const auto pre = exp2_problem(static_cast<int>(state.range(0)), ApplyMode::MatrixFree);
  SolverConfig cfg;
  cfg.alpha = balanced_alpha(pre);
  cfg.eta = 6;
  for (auto _ : state) {
    auto sol = solve<Complex>(pre, cfg);
    benchmark::DoNotOptimize(sol.c_hat.data());
  }
}
BENCHMARK(BM_SolveExp2)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
