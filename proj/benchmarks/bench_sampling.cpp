#include <benchmark/benchmark.h>

#include <vector>

#include "ssgp/constructive.hpp"
#include "ssgp/rng.hpp"
#include "ssgp/sampling.hpp"
#include "ssgp/variations.hpp"

namespace {

using namespace ssgp;

const ModelParams kParams = ModelParams::make(0.7, 0.2);

void BM_NormalFill(benchmark::State& state) {
  const NormalStream stream(SeedSpec{42, 0});
  std::vector<double> buf(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    stream.fill(buf.data(), buf.size());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NormalFill)->Arg(1 << 16);

void BM_GramCholesky(benchmark::State& state) {
  const Grid grid = Grid::make(state.range(0));
  const CovarianceKernel k = x_kernel(kParams);
  const std::vector<double> times(grid.times.begin() + 1, grid.times.end());
  for (auto _ : state) {
    const Eigen::MatrixXd gram = gram_matrix(k, times);
    benchmark::DoNotOptimize(cholesky_psd(gram));
  }
}
BENCHMARK(BM_GramCholesky)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_ExactPaths(benchmark::State& state) {
  const Grid grid = Grid::make(256);
  const CovarianceKernel k = x_kernel(kParams);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_gaussian_paths(k, grid, SeedSpec{42, 0}, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExactPaths)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FbmCirculant(benchmark::State& state) {
  const Grid grid = Grid::make(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_fbm(0.7, grid, SeedSpec{42, 0}, 100, FbmMethod::circulant));
}
BENCHMARK(BM_FbmCirculant)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

void BM_ConstructiveMesh(benchmark::State& state) {
  const Grid grid = Grid::make(state.range(0));
  const long nodes_eta = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(build_constructive_mesh(kParams, grid, nodes_eta));
}
BENCHMARK(BM_ConstructiveMesh)->Args({16, 256})->Args({64, 640})->Unit(benchmark::kMillisecond);

void BM_HermiteVariation(benchmark::State& state) {
  const long n = state.range(0);
  const Grid grid = Grid::make(n);
  const PathSet paths = sample_gaussian_paths(x_kernel(kParams), grid, SeedSpec{42, 0}, 1);
  const SamplePath path = paths.path(0);
  const std::vector<double> betas = exact_betas(kParams, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(hermite_variation(path, betas, 2, 1.0));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_HermiteVariation)->Arg(1024);

}  // namespace
