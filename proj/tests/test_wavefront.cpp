#include "generators.hpp"

#include "symcount/wavefront.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace symcount;
using namespace symcount::wavefront;
using linalg::Matrix;

namespace {

Matrix base_point(double m1, double m2, std::vector<int> w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd margins(2);
  margins << m1, m2;
  return synthesize_base_point({2, 1}, log_a_from_margins(margins), w, rng);
}

}  // namespace

TEST_CASE("the literal Killing form matches its closed form") {
  std::mt19937_64 rng(3);
  for (int d = 2; d <= 4; ++d)
    for (int t = 0; t < 20; ++t) {
      const Matrix x = gen::random_traceless(d, rng), y = gen::random_traceless(d, rng);
      const double b = killing_form(x, y);
      CHECK(b == doctest::Approx(b_inner(x, y)).epsilon(1e-10));
      CHECK(b == doctest::Approx(2.0 * d * (x * y.transpose()).trace()).epsilon(1e-10));
      CHECK(killing_form(x, x) > 0);
    }
}

TEST_CASE("random tangents are traceless unit vectors") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Matrix x = random_tangent(3, rng);
    CHECK(std::abs(x.trace()) < 1e-12);
    CHECK(b_norm(x) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("group distance: identity, first order, symmetry, triangle inequality") {
  std::mt19937_64 rng(5);
  const Matrix x = gen::random_sl(3, rng, 50);
  CHECK(group_distance(x, x) == 0.0);

  const Matrix X = random_tangent(3, rng);
  const double t = 1e-4;
  CHECK(group_distance(linalg::expm(t * X), Matrix::Identity(3, 3)) ==
        doctest::Approx(t * b_norm(X)).epsilon(1e-6));

  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = linalg::expm(0.05 * random_tangent(3, rng));
    const Matrix b = linalg::expm(0.05 * random_tangent(3, rng)) * a;
    const Matrix c = linalg::expm(0.05 * random_tangent(3, rng)) * b;
    CHECK(std::abs(group_distance(a, b) - group_distance(b, a)) < 1e-12);
    CHECK(group_distance(a, c) <= group_distance(a, b) + group_distance(b, c) + 1e-9);
    ++checked;
  }
  CHECK(checked == 200);

  Matrix far = Matrix::Identity(3, 3);
  far(0, 0) = 4.0;
  far(1, 1) = 0.25;
  CHECK_THROWS_AS(group_distance(far, Matrix::Identity(3, 3)), DistanceDomainError);
}

TEST_CASE("fine probe at a regular point is finite, crossing-free and stable under refinement") {
  const Matrix g = base_point(1.0, 1.5, {1, 1, -1}, 3);
  ProbeReport r[3];
  const double eps[3] = {1e-2, 1e-3, 1e-4};
  for (int i = 0; i < 3; ++i) {
    r[i] = fine_probe(g, {2, 1}, eps[i], 64, 5);
    CHECK(r[i].success);
    CHECK(r[i].crossings == 0);
    CHECK(std::isfinite(r[i].ratio_k));
    CHECK(std::isfinite(r[i].ratio_a));
    CHECK(std::isfinite(r[i].ratio_h));
    CHECK(r[i].samples == 64);
  }
  for (int i = 0; i + 1 < 3; ++i) {
    CHECK(r[i + 1].ratio_k == doctest::Approx(r[i].ratio_k).epsilon(0.2));
    CHECK(r[i + 1].ratio_a == doctest::Approx(r[i].ratio_a).epsilon(0.2));
    CHECK(r[i + 1].ratio_h == doctest::Approx(r[i].ratio_h).epsilon(0.2));
  }
  const auto again = fine_probe(g, {2, 1}, 1e-3, 64, 5);
  CHECK(again.ratio_k == r[1].ratio_k);
  CHECK(again.ratio_h == r[1].ratio_h);
}

TEST_CASE("no Weyl crossings when all margins exceed ten epsilon") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix g = base_point(0.02 + 0.1 * static_cast<double>(seed % 5), 0.5, seed % 2 ? std::vector<int>{1, -1, 1} : std::vector<int>{1, 1, -1}, seed);
    CHECK(fine_probe(g, {2, 1}, 1e-3, 32, seed).crossings == 0);
  }
}

TEST_CASE("the identity is singular for the fine probe") {
  const auto r = fine_probe(Matrix::Identity(3, 3), {2, 1}, 1e-3, 64, 5);
  const bool blown = r.crossings > 0 || !std::isfinite(r.ratio_k) || r.ratio_k > 1e3;
  CHECK(blown);
}

TEST_CASE("coarse probe with I empty coincides with the fine probe") {
  const Matrix g = base_point(0.8, 1.2, {1, 1, -1}, 7);
  const auto fine = fine_probe(g, {2, 1}, 1e-3, 32, 9);
  const auto coarse = coarse_probe(g, {2, 1}, {}, 1e-3, 32, 9, 0.5);
  CHECK(coarse.ratio_coarse_aI == doctest::Approx(fine.ratio_a).epsilon(1e-6));
  const auto paired = paired_probe(g, {2, 1}, {}, 1e-3, 32, 9);
  CHECK(paired.ratio_k == fine.ratio_k);
  CHECK(paired.ratio_coarse_aI == doctest::Approx(coarse.ratio_coarse_aI).epsilon(1e-12));
}

TEST_CASE("near an alpha_1 wall the coarse observables stay bounded") {
  const std::vector<int> I{0};
  const Matrix wall = base_point(0.01, 1.5, {1, 1, -1}, 11);
  const Matrix deep = base_point(1.0, 1.5, {1, 1, -1}, 11);
  const auto near_rep = paired_probe(wall, {2, 1}, I, 1e-3, 64, 13);
  const auto deep_rep = paired_probe(deep, {2, 1}, I, 1e-3, 64, 13);
  CHECK(near_rep.ratio_k > 5 * deep_rep.ratio_k);
  CHECK(near_rep.ratio_coarse_aI < 2 * deep_rep.ratio_coarse_aI);
  CHECK(near_rep.ratio_coarse_frame < 2 * deep_rep.ratio_coarse_frame);
  // the requirement on the complement of I is enforced
  CHECK_THROWS(coarse_probe(base_point(1.0, 0.01, {1, 1, -1}, 11), {2, 1}, I, 1e-3, 8, 1, 0.5));
}

TEST_CASE("coarse ratios are finite inside a glued block") {
  const std::vector<int> I{0};
  const Matrix g1 = base_point(0.3, 1.0, {1, 1, -1}, 21);
  const auto r = coarse_probe(g1, {2, 1}, I, 1e-3, 16, 3, 0.5);
  CHECK(std::isfinite(r.ratio_coarse_aI));
  CHECK(r.ratio_coarse_aI >= 0);
}

TEST_CASE("sweeps are deterministic across thread counts") {
  SweepConfig cfg;
  cfg.c_grid = {0.1, 0.5};
  cfg.depth_edges = {1, 2, 3};
  cfg.base_points = 4;
  cfg.directions = 4;
  cfg.seed = 99;
  cfg.threads = 1;
  std::ostringstream a, b;
  write_sweep_csv(a, lipschitz_sweep(cfg));
  cfg.threads = 3;
  write_sweep_csv(b, lipschitz_sweep(cfg));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("c,depth,ratio_k,ratio_a,ratio_h,ratio_coarse_aI,ratio_coarse_frame,crossings", 0) == 0);

  cfg.c_grid = {};
  CHECK_THROWS(lipschitz_sweep(cfg));
}

TEST_CASE("Riemannian signature blows up towards the wall") {
  SweepConfig cfg;
  cfg.signature = {3, 0};
  cfg.c_grid = {0.01, 0.5};
  cfg.depth_edges = {1, 2};
  cfg.base_points = 8;
  cfg.directions = 8;
  cfg.seed = 5;
  cfg.wall_root = 0;
  cfg.threads = 1;
  const auto cells = lipschitz_sweep(cfg);
  REQUIRE(cells.size() == 2);
  REQUIRE(cells[0].ratio_k.has_value());
  REQUIRE(cells[1].ratio_k.has_value());
  CHECK(*cells[0].ratio_k > 10 * *cells[1].ratio_k);
}
