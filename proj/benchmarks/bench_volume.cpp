#include "symcount/volume.hpp"

#include <benchmark/benchmark.h>

using namespace symcount;

static void BM_VolumeMonteCarlo(benchmark::State& state) {
  const auto spec = sector::sign_pattern_spec({1, 1, -1});
  volume::VolumeOptions o;
  o.samples = static_cast<std::size_t>(state.range(0));
  o.threads = 1;
  const std::vector<double> grid{10, 20, 40, 80};
  for (auto _ : state) {
    o.seed++;
    benchmark::DoNotOptimize(volume::volume_series(spec, grid, o));
  }
}
BENCHMARK(BM_VolumeMonteCarlo)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_VolumeQuadratureFrobenius(benchmark::State& state) {
  auto spec = sector::sign_pattern_spec({1, 1, -1});
  spec.norm = enumerate::Norm::frobenius;
  volume::VolumeOptions o;
  o.method = volume::Method::quadrature;
  o.rel_tol = 1e-6;
  o.threads = 1;
  const std::vector<double> grid{10, 20, 40, 80};
  for (auto _ : state) benchmark::DoNotOptimize(volume::volume_series(spec, grid, o));
}
BENCHMARK(BM_VolumeQuadratureFrobenius)->Unit(benchmark::kMillisecond);

static void BM_XiDensity(benchmark::State& state) {
  const auto ctx = volume::make_context(rootdata::build_root_datum(3, 2, 1), {});
  Eigen::Vector3d la(1.0, 0.2, -1.2);
  for (auto _ : state) {
    la(0) += 1e-12;
    benchmark::DoNotOptimize(volume::xi_density(ctx, la));
  }
}
BENCHMARK(BM_XiDensity);
