#include <benchmark/benchmark.h>

#include "framelab/duality.hpp"
#include "framelab/frame_ops.hpp"
#include "framelab/random.hpp"

using namespace framelab;

namespace {

FrameDocument system_of(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  return random_system(42, n, static_cast<std::size_t>(n), 2, Field::Complex, "bench");
}

BoundedOperator random_k(Index n) {
  Rng rng(7);
  return BoundedOperator(rng.matrix(n, n, Field::Complex) + 2.0 * identity(n));
}

}  // namespace

static void BM_FrameOperator(benchmark::State& state) {
  const FrameDocument d = system_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(frame_operator(d.system));
}
BENCHMARK(BM_FrameOperator)->RangeMultiplier(2)->Range(4, 64);

static void BM_OptimalBounds(benchmark::State& state) {
  const FrameDocument d = system_of(state);
  const BoundedOperator k = random_k(d.system.dim());
  for (auto _ : state) benchmark::DoNotOptimize(optimal_bounds(d.system, k));
}
BENCHMARK(BM_OptimalBounds)->RangeMultiplier(2)->Range(4, 64);

static void BM_Pinv(benchmark::State& state) {
  Rng rng(3);
  const auto n = static_cast<Index>(state.range(0));
  const Matrix m = rng.matrix(n, 2 * n, Field::Complex);
  for (auto _ : state) benchmark::DoNotOptimize(pinv(m));
}
BENCHMARK(BM_Pinv)->RangeMultiplier(2)->Range(4, 128);

static void BM_ConstructQDual(benchmark::State& state) {
  const FrameDocument d = system_of(state);
  const BoundedOperator k = random_k(d.system.dim());
  for (auto _ : state) benchmark::DoNotOptimize(construct_q_dual(d.system, k));
}
BENCHMARK(BM_ConstructQDual)->RangeMultiplier(2)->Range(4, 32);

BENCHMARK_MAIN();
