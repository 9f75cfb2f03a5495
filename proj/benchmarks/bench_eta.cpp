#include <benchmark/benchmark.h>

#include "weillift/eta.hpp"
#include "weillift/forms.hpp"

using namespace weillift;

static void BM_eta_eval(benchmark::State& state) {
  ScopedPrecision sp(state.range(0));
  Complex tau{Real(0.3137), Real(0.04)};
  for (auto _ : state) benchmark::DoNotOptimize(qexp::eta(tau));
}
BENCHMARK(BM_eta_eval)->Arg(128)->Arg(256)->Arg(512);

static void BM_hauptmodul_eval(benchmark::State& state) {
  ScopedPrecision sp(256);
  Complex tau{Real(0.21), Real(0.37)};
  for (auto _ : state) benchmark::DoNotOptimize(qexp::hauptmodul_eval(state.range(0), tau));
}
BENCHMARK(BM_hauptmodul_eval)->Arg(3)->Arg(13);

static void BM_delta_qexp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qexp::delta_qexp(state.range(0)));
}
BENCHMARK(BM_delta_qexp)->Arg(50)->Arg(200);
