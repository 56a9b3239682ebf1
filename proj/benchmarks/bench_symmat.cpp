#include <benchmark/benchmark.h>

#include "ascent/rng.hpp"
#include "ascent/symmat.hpp"

using namespace ascent;

namespace {

std::vector<SymMat> random_batch(std::size_t p, std::size_t count) {
  RngStream rng(0xBE, p);
  std::vector<SymMat> batch;
  batch.reserve(count);
  for (std::size_t it = 0; it < count; ++it) {
    SymMat m(p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j) m.set(i, j, 4.0 * rng.uniform01() - 2.0);
    batch.push_back(std::move(m));
  }
  return batch;
}

void BM_SymEig(benchmark::State& state) {
  const auto batch = random_batch(static_cast<std::size_t>(state.range(0)), 256);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sym_eig(batch[k++ & 255]));
  }
}
BENCHMARK(BM_SymEig)->Arg(2)->Arg(3);

void BM_ProjectPsd(benchmark::State& state) {
  const auto batch = random_batch(static_cast<std::size_t>(state.range(0)), 256);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_psd(batch[k++ & 255]));
  }
}
BENCHMARK(BM_ProjectPsd)->Arg(2)->Arg(3);

void BM_ViolationNorm(benchmark::State& state) {
  const auto batch = random_batch(2, 256);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(violation_norm(batch[k++ & 255]));
  }
}
BENCHMARK(BM_ViolationNorm);

}  // namespace

BENCHMARK_MAIN();
