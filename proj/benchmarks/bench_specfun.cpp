#include <benchmark/benchmark.h>

#include "tri/specfun.hpp"

namespace sf = tri::specfun;

static void BM_EllipK(benchmark::State& state) {
  double k = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf::ellip_k(k));
    k = k < 0.99 ? k + 1e-4 : 0.1;
  }
}
BENCHMARK(BM_EllipK);

static void BM_EllipF(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sf::ellip_f(1.1, 0.8));
}
BENCHMARK(BM_EllipF);

static void BM_Dilog(benchmark::State& state) {
  double x = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf::dilog(x));
    x = x < 0.99 ? x + 1e-3 : -2.0;
  }
}
BENCHMARK(BM_Dilog);

static void BM_Hyp3F2UnitArgument(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sf::hyp3f2_halves(1.0).value);
}
BENCHMARK(BM_Hyp3F2UnitArgument)->Unit(benchmark::kMillisecond);
