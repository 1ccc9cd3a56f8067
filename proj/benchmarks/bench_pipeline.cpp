// Serial vs OpenMP comparison for the two data-parallel stages: the
// per-margin covariance aggregation and the incoherence sweep over M.
// Run with: ./bench_pipeline [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>

#include "eglasso/diagnostics.hpp"
#include "eglasso/simulator.hpp"
#include "eglasso/tail_estimator.hpp"

namespace {

using namespace eglasso;

ExceedanceSet make_exceedances(int d, long n) {
  std::mt19937_64 rng(42);
  EdgeSet graph;
  graph.d = d;
  for (int v = 1; v < d; ++v) graph.add(v - 1, v);
  const PrecisionTheta theta =
      theta_from_graph(graph, WeightRule::uniform(0.5, 1.0), rng);
  SampleMatrix sample;
  sample.values = sample_mvpareto(theta, n, 42);
  const Eigen::MatrixXd x_hat = rank_transform(sample);
  return select_exceedances(x_hat, static_cast<int>(0.05 * n));
}

void bm_aggregate_serial(benchmark::State& state) {
  const ExceedanceSet exc = make_exceedances(60, 20000);
  for (auto _ : state)
    benchmark::DoNotOptimize(aggregate_S(exc, 1.0, false));
}
BENCHMARK(bm_aggregate_serial)->Unit(benchmark::kMillisecond);

void bm_aggregate_parallel(benchmark::State& state) {
  const ExceedanceSet exc = make_exceedances(60, 20000);
  for (auto _ : state)
    benchmark::DoNotOptimize(aggregate_S(exc, 1.0, true));
}
BENCHMARK(bm_aggregate_parallel)->Unit(benchmark::kMillisecond);

std::vector<double> m_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 32; ++i) grid.push_back(0.01 * i);
  return grid;
}

void bm_sweep_serial(benchmark::State& state) {
  const PrecisionTheta theta = diamond_theta();
  const EdgeSet edges = diamond_edges();
  const auto grid = m_grid();
  for (auto _ : state)
    benchmark::DoNotOptimize(incoherence_sweep(theta, edges, grid, false));
}
BENCHMARK(bm_sweep_serial)->Unit(benchmark::kMillisecond);

void bm_sweep_parallel(benchmark::State& state) {
  const PrecisionTheta theta = diamond_theta();
  const EdgeSet edges = diamond_edges();
  const auto grid = m_grid();
  for (auto _ : state)
    benchmark::DoNotOptimize(incoherence_sweep(theta, edges, grid, true));
}
BENCHMARK(bm_sweep_parallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
