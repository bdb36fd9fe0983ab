#include <benchmark/benchmark.h>

#include "tri/constants.hpp"
#include "tri/models.hpp"

using namespace tri;

static void BM_SideNormalization(benchmark::State& state) {
  const auto m = all_models[static_cast<std::size_t>(state.range(0))];
  const auto region = domains::side_region(m);
  const auto kernel = domains::side_kernel(m);
  for (auto _ : state) benchmark::DoNotOptimize(quad::integrate_2d(kernel, region).value);
  state.SetLabel(std::string(model_key(m)));
}
BENCHMARK(BM_SideNormalization)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

static void BM_AngleMoment(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(constants::quadrature_moment(ModelId::m5_quarter_circle, Functional::alphabeta).value);
}
BENCHMARK(BM_AngleMoment)->Unit(benchmark::kMillisecond);

static void BM_UnivariateEighthSphereAngle(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(univariate_density(ModelId::m6_eighth_sphere, Variable::angle_alpha, 1.0));
}
BENCHMARK(BM_UnivariateEighthSphereAngle)->Unit(benchmark::kMicrosecond);
