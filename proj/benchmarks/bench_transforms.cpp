#include <benchmark/benchmark.h>

#include "dantzig/dictionary.hpp"
#include "dantzig/rng.hpp"

namespace {

using namespace dantzig;

ComplexVec random_vector(Index p) {
  Rng rng(11);
  ComplexVec v(p);
  for (Index i = 0; i < p; ++i) v[i] = Complex(rng.normal(), rng.normal());
  return v;
}

template <typename Make>
void transform_roundtrip(benchmark::State& state, Make make) {
  const Index p = state.range(0);
  const TransformBlock block = make(p);
  const ComplexVec v = random_vector(p);
  ComplexVec coeffs(p), back(p);
  for (auto _ : state) {
    block.adjoint_apply<Complex>(v, coeffs);
    block.apply<Complex>(coeffs, back);
    benchmark::DoNotOptimize(back.data());
  }
}

void BM_Dft(benchmark::State& s) { transform_roundtrip(s, [](Index p) { return TransformBlock::dft(p); }); }
void BM_Dct(benchmark::State& s) { transform_roundtrip(s, [](Index p) { return TransformBlock::dct(p); }); }
void BM_Haar5(benchmark::State& s) {
  transform_roundtrip(s, [](Index p) { return TransformBlock::haar(p, 5); });
}

BENCHMARK(BM_Dft)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(BM_Dct)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(BM_Haar5)->RangeMultiplier(4)->Range(256, 4096);

}  // namespace
