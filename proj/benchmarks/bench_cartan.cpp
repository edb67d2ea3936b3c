#include "symcount/cartan.hpp"
#include "symcount/wavefront.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace symcount;

static void BM_KahDecompose(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const cartan::Signature sig{d - 1, 1};
  std::mt19937_64 rng(1);
  std::vector<linalg::Matrix> gs;
  for (int i = 0; i < 64; ++i) {
    Eigen::VectorXd margins = Eigen::VectorXd::Constant(d - 1, 0.7);
    std::vector<int> w(d, 1);
    w.back() = -1;
    gs.push_back(wavefront::synthesize_base_point(sig, wavefront::log_a_from_margins(margins), w, rng));
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cartan::kah_decompose(gs[i++ % gs.size()], sig));
}
BENCHMARK(BM_KahDecompose)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

static void BM_PairedProbe(benchmark::State& state) {
  std::mt19937_64 rng(2);
  Eigen::VectorXd margins(2);
  margins << 0.05, 1.0;
  const auto g = wavefront::synthesize_base_point({2, 1}, wavefront::log_a_from_margins(margins), {1, 1, -1}, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(wavefront::paired_probe(g, {2, 1}, {0}, 1e-3, 16, seed++));
}
BENCHMARK(BM_PairedProbe);
