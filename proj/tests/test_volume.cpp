#include "symcount/volume.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace symcount;
using namespace symcount::volume;
using sector::BlockConstraint;
using sector::BlockSignature;
using sector::SectorSpec;

namespace {

SectorSpec signature_spec(int p, int q) {
  SectorSpec s;
  s.blocks = rootdata::BlockDecomposition({1, 1, 1});
  s.constraints.assign(3, BlockConstraint{});
  s.total_signature = BlockSignature{p, q};
  return s;
}

SectorSpec block12() {
  SectorSpec s;
  s.blocks = rootdata::BlockDecomposition({1, 2});
  BlockConstraint c0, c1;
  c0.signature = BlockSignature{1, 0};
  c1.signature = BlockSignature{1, 1};
  c1.max_log_spread = 2.0;
  s.constraints = {c0, c1};
  return s;
}

VolumeOptions mc(std::uint64_t seed, std::size_t n = 40000) {
  VolumeOptions o;
  o.seed = seed;
  o.samples = n;
  o.threads = 1;
  return o;
}

}  // namespace

TEST_CASE("chamber membership") {
  Eigen::Vector3d x(1.0, 0.0, -1.0);
  CHECK(in_chamber(x));
  x << 0.0, 1.0, -1.0;
  CHECK_FALSE(in_chamber(x));
}

TEST_CASE("densities are nonnegative on the chamber and vanish only on walls") {
  const auto ctxs = contexts_for_spec(signature_spec(2, 1));
  CHECK(ctxs.size() == 3);
  std::mt19937_64 rng(4);
  std::exponential_distribution<double> e(1.0);
  for (const auto& ctx : ctxs)
    for (int t = 0; t < 2000; ++t) {
      const double m1 = e(rng), m2 = e(rng);
      Eigen::Vector3d la((2 * m1 + m2) / 3, (m2 - m1) / 3, -(m1 + 2 * m2) / 3);
      CHECK(xi_density(ctx, la) >= 0.0);
    }
  Eigen::Vector3d outside(0.0, 1.0, -1.0);
  CHECK_THROWS(xi_density(ctxs[0], outside));
}

TEST_CASE("density matches the root product by hand") {
  const auto rd = rootdata::build_root_datum(std::vector<int>{1, 1, -1});
  const auto ctx = make_context(rd, {});
  Eigen::Vector3d la(1.0, 0.2, -1.2);
  const double expect = std::sinh(0.8) * std::cosh(2.2) * std::cosh(1.4);
  CHECK(xi_density(ctx, la) == doctest::Approx(expect).epsilon(1e-12));

  const auto glued = make_context(rd, {0});
  CHECK(glued.blocks == rootdata::BlockDecomposition({2, 1}));
  Eigen::Vector3d lb(0.3, -0.3, 0.0);
  CHECK(delta_density(glued, lb) == doctest::Approx(std::sinh(0.6)).epsilon(1e-12));
}

TEST_CASE("sign-pattern specs have a single arrangement") {
  CHECK(contexts_for_spec(sector::sign_pattern_spec({1, 1, -1})).size() == 1);
  CHECK(contexts_for_spec(block12()).size() >= 1);
}

TEST_CASE("Monte Carlo volumes are reproducible and grow with T") {
  const auto spec = sector::sign_pattern_spec({1, 1, -1});
  const std::vector<double> grid{10, 14, 20, 28};
  const auto a = volume_series(spec, grid, mc(3));
  const auto b = volume_series(spec, grid, mc(3));
  CHECK(a.values == b.values);
  auto threaded = mc(3);
  threaded.threads = 3;
  CHECK(volume_series(spec, grid, threaded).values == a.values);
  const auto c = volume_series(spec, grid, mc(4));
  CHECK(c.values != a.values);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(a.values[j] > 0);
    CHECK(a.stderr_values[j] > 0);
    CHECK(std::abs(a.values[j] - c.values[j]) < 5 * std::hypot(a.stderr_values[j], c.stderr_values[j]));
    if (j > 0) CHECK(a.values[j] > a.values[j - 1]);
  }
  REQUIRE(a.fit.has_value());
  CHECK(a.fit->a_hat == doctest::Approx(3.0).epsilon(0.1));
  CHECK(a.manifest["predicted_a"] == "3");
}

TEST_CASE("quadrature and Monte Carlo agree for the Frobenius norm") {
  auto spec = sector::sign_pattern_spec({1, 1, -1});
  spec.norm = enumerate::Norm::frobenius;
  const std::vector<double> grid{10, 20};
  VolumeOptions q;
  q.method = Method::quadrature;
  q.rel_tol = 1e-6;
  q.threads = 1;
  const auto quad = volume_series(spec, grid, q);
  const auto m = volume_series(spec, grid, mc(9, 200000));
  for (std::size_t j = 0; j < grid.size(); ++j)
    CHECK(std::abs(quad.values[j] - m.values[j]) < 4 * m.stderr_values[j] + 1e-3 * quad.values[j]);
}

TEST_CASE("block sector volume slope") {
  const std::vector<double> grid{10, 20, 40, 80, 160};
  const auto s = volume_series(block12(), grid, mc(5, 100000));
  REQUIRE(s.fit.has_value());
  CHECK(std::abs(s.fit->a_hat - 1.5) < 0.15);
}

TEST_CASE("singular volume") {
  const auto spec = signature_spec(2, 1);
  const std::vector<double> grid{20};
  const auto full = volume_series(spec, grid, mc(6));
  CHECK(singular_volume(spec, 0.0, grid, mc(6)).values[0] == 0.0);
  double prev = 0;
  for (double c : {0.05, 0.1, 0.2, 0.4}) {
    const auto s = singular_volume(spec, c, grid, mc(6));
    CHECK(s.values[0] > prev);
    CHECK(s.values[0] < full.values[0]);
    prev = s.values[0];
  }
  CHECK_THROWS(singular_volume(spec, -0.1, grid, mc(6)));
}

TEST_CASE("well-roundedness ratio") {
  const auto spec = sector::sign_pattern_spec({1, 1, -1});
  const auto w = wellroundedness_ratio(spec, 0.05, 20, 3, 20000, 16, 1);
  CHECK(w.ratio >= 0.0);
  CHECK(w.ratio <= 1.0);
  CHECK(w.boundary <= w.interior);
  const auto wider = wellroundedness_ratio(spec, 0.2, 20, 3, 20000, 16, 1);
  CHECK(wider.ratio > w.ratio);
  CHECK(wellroundedness_ratio(spec, 0.05, 20, 3, 20000, 16, 1).ratio == w.ratio);
}

TEST_CASE("method parsing") {
  CHECK(parse_method("mc") == Method::monte_carlo);
  CHECK(parse_method("quadrature") == Method::quadrature);
  CHECK_THROWS(parse_method("simpson"));
}

TEST_CASE("density along the ray (t, 0, -t) and monotonicity along chamber rays") {
  const auto ctx = make_context(rootdata::build_root_datum(3, 2, 1), {});
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    Eigen::Vector3d la(t, 0.0, -t);
    CHECK(xi_density(ctx, la) == doctest::Approx(std::sinh(t) * std::cosh(2 * t) * std::cosh(t)).epsilon(1e-12));
  }
  CHECK(xi_density(ctx, Eigen::Vector3d::Zero()) == 0.0);
  std::mt19937_64 rng(12);
  std::exponential_distribution<double> e(1.0);
  for (int t = 0; t < 500; ++t) {
    const double m1 = e(rng), m2 = e(rng);
    Eigen::Vector3d dir((2 * m1 + m2) / 3, (m2 - m1) / 3, -(m1 + 2 * m2) / 3);
    CHECK(xi_density(ctx, 1.1 * dir) >= xi_density(ctx, dir));
  }
}

TEST_CASE("normalized volumes settle at the grid tail") {
  const std::vector<double> grid{40, 80, 160, 320};
  const auto s = volume_series(sector::sign_pattern_spec({1, 1, -1}), grid, mc(14, 200000));
  std::vector<double> r;
  for (std::size_t j = 0; j < grid.size(); ++j) r.push_back(s.values[j] / std::pow(grid[j], 3.0));
  CHECK(std::abs(r[3] / r[2] - 1) < 0.05);
  CHECK(std::abs(r[2] / r[1] - 1) < 0.05);
}

TEST_CASE("a thin cap is dominated by its boundary") {
  Eigen::Vector3d z(0, 0, 1);
  const auto spec = sector::sign_pattern_spec({1, 1, -1}, sector::FrameConstraint::cap(z, 0.01));
  const auto w = wellroundedness_ratio(spec, 0.05, 20, 3, 20000, 16, 1);
  CHECK(w.ratio > 0.9);
}
