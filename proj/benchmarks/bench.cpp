#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "holophase/circle_retrieval.hpp"
#include "holophase/generators.hpp"
#include "holophase/harmonic.hpp"
#include "holophase/sampling.hpp"
#include "holophase/segment_retrieval.hpp"

using namespace holophase;

namespace {

FunctionSpec benchmark_spec() {
  GeneratorConfig cfg;
  cfg.seed = 17;
  cfg.avoid_radius = 0.6;
  return random_factored_spec(cfg, true, true);
}

void BM_eval_factored(benchmark::State& state) {
  const auto spec = benchmark_spec();
  const Complex z{0.21, -0.13};
  for (auto _ : state) benchmark::DoNotOptimize(eval(spec, z));
}
BENCHMARK(BM_eval_factored);

void BM_poisson_integral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> samples(n);
  for (int j = 0; j < n; ++j)
    samples[j] = std::log(std::abs(2.0 + std::polar(1.0, kTwoPi * j / n)));
  const Complex z{0.2, 0.1};
  for (auto _ : state)
    benchmark::DoNotOptimize(poisson_integral(samples, 1.0, z));
}
BENCHMARK(BM_poisson_integral)->Arg(256)->Arg(1024)->Arg(4096);

void BM_sample_segment(benchmark::State& state) {
  GeneratorConfig cfg;
  cfg.seed = 3;
  const auto spec = random_power_series_spec(cfg, 2);
  SegmentPair pair;
  pair.base = SegmentSpec{Complex{0.0, 0.0}, 1.0, 0.0};
  pair.rotation_angle = std::sqrt(2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_segment(spec, pair, 401));
}
BENCHMARK(BM_sample_segment);

void BM_segment_reconstruction(benchmark::State& state) {
  GeneratorConfig cfg;
  cfg.seed = 3;
  const auto spec = random_power_series_spec(cfg, 2);
  SegmentPair pair;
  pair.base = SegmentSpec{Complex{0.0, 0.0}, 1.0, 0.0};
  pair.rotation_angle = std::sqrt(2.0);
  const auto [trace_I, trace_Ia] = sample_segment(spec, pair, 401);
  for (auto _ : state)
    benchmark::DoNotOptimize(reconstruct_from_segments(
        trace_I, trace_Ia, pair.rotation_angle, 16));
}
BENCHMARK(BM_segment_reconstruction);

void BM_circle_reconstruction(benchmark::State& state) {
  GeneratorConfig cfg;
  cfg.seed = 23;
  cfg.avoid_radius = 0.6;
  cfg.max_zero_count = static_cast<int>(state.range(0));
  const auto spec = random_factored_spec(cfg, false, false);
  CirclePairData data;
  data.rho = 0.6;
  data.outer_trace = sample_circle(spec, 1.0, 1024);
  data.inner_trace = sample_circle(spec, 0.6, 1024);
  for (auto _ : state)
    benchmark::DoNotOptimize(reconstruct_from_circles(data, 6));
}
BENCHMARK(BM_circle_reconstruction)->Arg(2)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
