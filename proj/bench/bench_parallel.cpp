#include <benchmark/benchmark.h>

#include <omp.h>

#include "entroflow/entropy_curve.hpp"
#include "entroflow/mc_sim.hpp"
#include "entroflow/sdde_gaussian.hpp"

using namespace entroflow;

namespace {

SimConfig sdde_config() {
  return SimConfig{DelayParams{0.0, -1.0, 1.0, 0.25}, InitialCondition{BrownianHistory{1.0}},
                   1e-3, 2.0, 20000, 42, {1.0, 2.0}};
}

void BM_SddeEmReference(benchmark::State& state) {
  const SimConfig cfg = sdde_config();
  for (auto _ : state) benchmark::DoNotOptimize(reference::simulate_sdde_em(cfg));
}
BENCHMARK(BM_SddeEmReference)->Unit(benchmark::kMillisecond);

void BM_SddeEmParallel(benchmark::State& state) {
  const SimConfig cfg = sdde_config();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_sdde_em(cfg, threads));
}
BENCHMARK(BM_SddeEmParallel)->Arg(1)->Arg(omp_get_max_threads())->Unit(benchmark::kMillisecond);

void BM_EntropyCurveBrownian(benchmark::State& state) {
  const DelayParams p{0.0, -1.0, 1.0, 0.25};
  const auto grid = uniform_grid_open(6.0, 2000);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(entropy_curve_brownian(p, 1.0, grid, threads));
}
BENCHMARK(BM_EntropyCurveBrownian)->Arg(1)->Arg(omp_get_max_threads())->Unit(benchmark::kMillisecond);

void BM_EntropyCurvePoint(benchmark::State& state) {
  const DelayParams p{0.0, -1.0, 1.1, 0.25};
  const auto grid = uniform_grid_open(6.6, 2000);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_curve_point(p, PointHistory{1.0}, grid, threads));
  }
}
BENCHMARK(BM_EntropyCurvePoint)->Arg(1)->Arg(omp_get_max_threads())->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
