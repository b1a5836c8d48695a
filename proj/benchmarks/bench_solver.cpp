#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "samplenash/game.hpp"

namespace {

std::vector<samplenash::GameMatrix> random_games(std::size_t n, int count) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<samplenash::GameMatrix> out;
  for (int k = 0; k < count; ++k) {
    std::vector<samplenash::GameMatrix::Row> rows(n);
    for (auto& r : rows) r = {u(rng), u(rng)};
    out.emplace_back(std::move(rows));
  }
  return out;
}

void BM_Solve2x2(benchmark::State& state) {
  auto games = random_games(2, 256);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(samplenash::solve_2x2(games[k++ % games.size()]));
}
BENCHMARK(BM_Solve2x2);

void BM_SolveNx2(benchmark::State& state) {
  auto games = random_games(static_cast<std::size_t>(state.range(0)), 256);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(samplenash::solve_nx2(games[k++ % games.size()]));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveNx2)->RangeMultiplier(4)->Range(2, 1024)->Complexity();

void BM_DeltaG(benchmark::State& state) {
  const samplenash::GameMatrix a{{1.0, 0.0}, {0.0, 1.0}, {0.3, 0.2}};
  for (auto _ : state) benchmark::DoNotOptimize(samplenash::delta_g(a));
}
BENCHMARK(BM_DeltaG);

}  // namespace
