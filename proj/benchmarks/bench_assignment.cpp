#include <benchmark/benchmark.h>

#include "scenefuzz/assignment.hpp"
#include "scenefuzz/rng.hpp"

using namespace scenefuzz;

namespace {

std::vector<std::vector<double>> random_cost(int n, int m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> cost(n, std::vector<double>(m));
  for (auto& row : cost)
    for (double& c : row) c = rng.uniform(0.0, 100.0);
  return cost;
}

void BM_AssignmentSquare(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto cost = random_cost(n, n, 42);
  for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(cost));
}
BENCHMARK(BM_AssignmentSquare)->Arg(5)->Arg(15);

void BM_AssignmentRect(benchmark::State& state) {
  auto cost = random_cost(15, 8, 43);
  for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(cost));
}
BENCHMARK(BM_AssignmentRect);

}  // namespace

BENCHMARK_MAIN();
