#include <benchmark/benchmark.h>

#include "tri/montecarlo.hpp"

using namespace tri;

static void BM_DrawSample(benchmark::State& state) {
  const auto m = all_models[static_cast<std::size_t>(state.range(0))];
  std::uint64_t j = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mc::draw_sample(m, 1, j++));
  state.SetLabel(std::string(model_key(m)));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DrawSample)->DenseRange(0, 5);

static void BM_EstimateMoment(benchmark::State& state) {
  const mc::RunOptions opts{static_cast<unsigned>(state.range(0)), mc::default_chunk_size};
  for (auto _ : state)
    benchmark::DoNotOptimize(mc::estimate_moment(ModelId::m2_quadratic_stick, Functional::ab, 200000, 7, opts).value);
  state.SetItemsProcessed(state.iterations() * 200000);
}
BENCHMARK(BM_EstimateMoment)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_GaussianAngles(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mc::gaussian_triangle_angles_3d(100000, 3, {1}).size());
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_GaussianAngles)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
