#include <benchmark/benchmark.h>

#include "samplenash/identify.hpp"

namespace {

const samplenash::GameMatrix kId{{1.0, 0.0}, {0.0, 1.0}};
const samplenash::GameMatrix kSupp3{{1.0, 0.0}, {0.0, 1.0}, {0.3, 0.2}};

void BM_SampleRounds(benchmark::State& state) {
  samplenash::SamplingEnv env(kSupp3, samplenash::NoiseKind::kGaussian, 1);
  for (auto _ : state) env.sample_rounds(1024);
  state.SetItemsProcessed(state.iterations() * 1024 * 6);
}
BENCHMARK(BM_SampleRounds);

void BM_EpsGoodGaussian(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    samplenash::SamplingEnv env(kId, samplenash::NoiseKind::kGaussian, seed++);
    benchmark::DoNotOptimize(samplenash::alg1_eps_good(env, 0.05, 0.05));
  }
}
BENCHMARK(BM_EpsGoodGaussian)->Unit(benchmark::kMillisecond);

void BM_SupportGaussian(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    samplenash::SamplingEnv env(kSupp3, samplenash::NoiseKind::kGaussian, seed++);
    benchmark::DoNotOptimize(samplenash::alg3_support(env, 0.05, 0.05));
  }
}
BENCHMARK(BM_SupportGaussian)->Unit(benchmark::kMillisecond);

}  // namespace
