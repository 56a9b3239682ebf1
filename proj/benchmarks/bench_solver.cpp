#include <benchmark/benchmark.h>

#include "ascent/constraint.hpp"
#include "ascent/mission.hpp"
#include "ascent/rap.hpp"
#include "ascent/rng.hpp"

using namespace ascent;

namespace {

void BM_InfoMatrix(benchmark::State& state) {
  const SensorModelParams params;
  const SensorPose pose{{0.0, 0.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(info_matrix(pose, {2.0, 1.5}, params));
  }
}
BENCHMARK(BM_InfoMatrix);

void BM_InfoGradient(benchmark::State& state) {
  const SensorModelParams params;
  const SensorPose pose{{0.0, 0.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(info_gradient(pose, {2.0, 1.5}, params, 0));
  }
}
BENCHMARK(BM_InfoGradient);

void BM_ViolationGradient(benchmark::State& state) {
  const SensorModelParams params;
  const std::size_t n = 4, m = static_cast<std::size_t>(state.range(0));
  RngStream rng(0xBE5, 1);
  EstimateSet data;
  data.targets.resize(m);
  for (auto& t : data.targets) {
    t.xhat = {10 * rng.uniform01(), 10 * rng.uniform01()};
    t.info = SymMat::sym2(2.0 + rng.uniform01(), 0.2, 2.0 + rng.uniform01());
  }
  std::vector<SensorPose> poses(n);
  for (auto& p : poses) p = {{10 * rng.uniform01(), 10 * rng.uniform01()}};
  DecisionVector z(m, n);
  z.set_gamma(0, 8.0);  // violated

  for (auto _ : state) {
    benchmark::DoNotOptimize(h_plus_grad(z, data, 0, poses, params));
  }
}
BENCHMARK(BM_ViolationGradient)->Arg(10)->Arg(100);

// One full planning window at experiment scale: 4 sensors, 100 landmarks.
void BM_InnerLoopWindow(benchmark::State& state) {
  ScenarioConfig config;
  config.seed = 23;
  WorldState world = initialize(config);
  MetricsHistory history;
  for (auto _ : state) {
    state.PauseTiming();
    WorldState fresh = world;
    MetricsHistory scratch;
    state.ResumeTiming();
    step(fresh, config, scratch);
  }
}
BENCHMARK(BM_InnerLoopWindow)->Unit(benchmark::kMillisecond);

}  // namespace
