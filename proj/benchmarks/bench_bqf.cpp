#include <benchmark/benchmark.h>

#include "weillift/bqf.hpp"
#include "weillift/numtheory.hpp"

using namespace weillift;

static void BM_class_group(benchmark::State& state) {
  long D = -static_cast<long>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bqf::class_group(D));
}
BENCHMARK(BM_class_group)->Arg(23)->Arg(103)->Arg(479);

static void BM_kronecker(benchmark::State& state) {
  long n = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nt::kronecker(-7, n));
    n = n % 100000 + 1;
  }
}
BENCHMARK(BM_kronecker);

static void BM_gamma0_classes(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bqf::gamma0_classes(state.range(0), 1));
}
BENCHMARK(BM_gamma0_classes)->Arg(45)->Arg(245)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
