#include <benchmark/benchmark.h>

#include "weillift/fqm.hpp"
#include "weillift/invariant.hpp"

using namespace weillift;
using namespace weillift::fqm;

static void BM_weil_S(benchmark::State& state) {
  ScopedPrecision sp(128);
  auto A = std::make_shared<FiniteQuadraticModule>(
      FiniteQuadraticModule::hyperbolic(state.range(0)));
  WeilVector v = random_vector(A, 7);
  for (auto _ : state) benchmark::DoNotOptimize(weil_S(v));
}
BENCHMARK(BM_weil_S)->Arg(12)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

static void BM_build_phiN(benchmark::State& state) {
  ScopedPrecision sp(128);
  for (auto _ : state) benchmark::DoNotOptimize(build_phiN(-3, -4, 1));
}
BENCHMARK(BM_build_phiN)->Unit(benchmark::kMillisecond);

static void BM_sparse_residual(benchmark::State& state) {
  ScopedPrecision sp(128);
  PhiN phi = build_phiN(-7, -4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sparse_S_residual(phi));
}
BENCHMARK(BM_sparse_residual)->Unit(benchmark::kMillisecond);
