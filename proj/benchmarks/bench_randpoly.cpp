#include <benchmark/benchmark.h>

#include <vector>

#include "randpoly/comparison.hpp"
#include "randpoly/ensembles.hpp"
#include "randpoly/kacrice.hpp"
#include "randpoly/montecarlo.hpp"
#include "randpoly/polyeval.hpp"
#include "randpoly/rootcount.hpp"

using namespace randpoly;

static void BM_PhiloxGaussianDraw(benchmark::State& state) {
  const NoiseSpec noise;
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(noise.innovation(42, 7, i++));
}
BENCHMARK(BM_PhiloxGaussianDraw);

static void BM_EvalWithDerivatives(benchmark::State& state) {
  const auto s = sample(hyperbolic_profile(1.0, state.range(0), 0.0), NoiseSpec{}, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(eval_with_derivatives(s, 0.999, 2));
}
BENCHMARK(BM_EvalWithDerivatives)->RangeMultiplier(8)->Range(64, 8192);

static void BM_ScaledMoments(benchmark::State& state) {
  const auto p = hyperbolic_profile(1.0, state.range(0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(scaled_moments(p, 0.99));
}
BENCHMARK(BM_ScaledMoments)->RangeMultiplier(8)->Range(64, 8192);

static void BM_KacRiceWholeLine(benchmark::State& state) {
  const auto p = hyperbolic_profile(1.0, state.range(0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(expected_total(p).total);
}
BENCHMARK(BM_KacRiceWholeLine)->RangeMultiplier(4)->Range(128, 8192)->Unit(benchmark::kMillisecond);

static void BM_CertifiedCountKac(benchmark::State& state) {
  const auto p = hyperbolic_profile(1.0, state.range(0), 0.0);
  RootCounter counter;
  std::vector<double> coeffs;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    state.PauseTiming();
    sample_into(p, NoiseSpec{}, 3, trial++, coeffs);
    state.ResumeTiming();
    benchmark::DoNotOptimize(counter.count(coeffs, Interval::real_line()).count);
  }
}
BENCHMARK(BM_CertifiedCountKac)->RangeMultiplier(4)->Range(128, 8192)->Unit(benchmark::kMicrosecond);

static void BM_SturmCountKac(benchmark::State& state) {
  const auto p = hyperbolic_profile(1.0, state.range(0), 0.0);
  const auto s = sample(p, NoiseSpec{NoiseFamily::rademacher, 0.0}, 3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sturm_exact(s.coeffs, Interval::real_line()));
}
BENCHMARK(BM_SturmCountKac)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

static void BM_ClassifyNearOne(benchmark::State& state) {
  const auto p = hyperbolic_profile(1.0, state.range(0), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_regime(p, Interval::half_open(0.9, 1.1)).regime);
  }
}
BENCHMARK(BM_ClassifyNearOne)->RangeMultiplier(8)->Range(128, 8192)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloTrials(benchmark::State& state) {
  const auto p = hyperbolic_profile(1.0, state.range(0), 0.0);
  MonteCarloOptions opts;
  opts.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_EN(p, NoiseSpec{}, Interval::real_line(), 100, 9, opts).mean);
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_MonteCarloTrials)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
