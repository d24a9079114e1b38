#include <benchmark/benchmark.h>

#include "ssgp/covariance.hpp"
#include "ssgp/psi_table.hpp"
#include "ssgp/variations.hpp"

namespace {

using namespace ssgp;

const ModelParams kParams = ModelParams::make(0.7, 0.2);

void BM_XCov(benchmark::State& state) {
  const auto method = static_cast<XMethod>(state.range(0));
  const ModelParams p = method == XMethod::h_half ? ModelParams::make(0.5, 0.5) : kParams;
  double s = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(x_cov(p, s, 0.8, method));
    s = s < 0.9 ? s + 0.01 : 0.3;
  }
  state.SetLabel(to_string(method));
}
BENCHMARK(BM_XCov)
    ->Arg(static_cast<int>(XMethod::decomposed))
    ->Arg(static_cast<int>(XMethod::h_half))
    ->Unit(benchmark::kMicrosecond);

void BM_XCovQuadratureRoutes(benchmark::State& state) {
  const auto method = static_cast<XMethod>(state.range(0));
  const ModelParams p = method == XMethod::spectral ? ModelParams::make(0.35, 0.4) : kParams;
  for (auto _ : state) benchmark::DoNotOptimize(x_cov(p, 0.4, 0.9, method));
  state.SetLabel(to_string(method));
}
BENCHMARK(BM_XCovQuadratureRoutes)
    ->Arg(static_cast<int>(XMethod::timedomain))
    ->Arg(static_cast<int>(XMethod::spectral))
    ->Unit(benchmark::kMillisecond);

void BM_PsiTableBuild(benchmark::State& state) {
  for (auto _ : state) {
    PsiTable table(kParams);
    benchmark::DoNotOptimize(table(1.0));
  }
}
BENCHMARK(BM_PsiTableBuild)->Unit(benchmark::kMillisecond);

void BM_PsiLookup(benchmark::State& state) {
  const PsiTable table(kParams);
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(table(x));
    x = x < 100 ? x * 1.01 : 0.01;
  }
}
BENCHMARK(BM_PsiLookup);

void BM_ExactVariationVariance(benchmark::State& state) {
  const long n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(exact_variation_variance(kParams, 2, n, 1.0));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ExactVariationVariance)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_BreuerMajorSigma2(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(breuer_major_sigma2(1.2, q));
}
BENCHMARK(BM_BreuerMajorSigma2)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

}  // namespace
