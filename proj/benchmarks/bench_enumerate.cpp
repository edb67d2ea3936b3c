#include "symcount/enumerate.hpp"
#include "symcount/sector.hpp"

#include <benchmark/benchmark.h>

using namespace symcount;

static void BM_CountBall3(benchmark::State& state) {
  const double T = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate::count_ball({3, T, enumerate::Norm::max_entry, 1}));
}
BENCHMARK(BM_CountBall3)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_CountBallGeneric(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const double T = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate::count_ball({d, T, enumerate::Norm::frobenius, 1}));
}
BENCHMARK(BM_CountBallGeneric)->Args({3, 8})->Args({4, 4})->Unit(benchmark::kMillisecond);

static void BM_CountSector(benchmark::State& state) {
  const std::vector<double> grid{4, 6, 8, static_cast<double>(state.range(0))};
  const auto spec = sector::sign_pattern_spec({1, 1, -1});
  for (auto _ : state) benchmark::DoNotOptimize(sector::count_sector(grid, spec, 3, 1));
}
BENCHMARK(BM_CountSector)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_Membership(benchmark::State& state) {
  const auto forms = enumerate::enumerate_all({3, 6.0, enumerate::Norm::max_entry, 1});
  const auto spec = sector::sign_pattern_spec({1, 1, -1});
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sector::sector_membership(forms[i++ % forms.size()], spec));
}
BENCHMARK(BM_Membership);
