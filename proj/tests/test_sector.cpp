#include "generators.hpp"

#include "symcount/sector.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace symcount;
using namespace symcount::sector;
using Tri = QuadraticForm::Triangle;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Eigen::VectorXd x(v.size());
  int i = 0;
  for (double e : v) x(i++) = e;
  return x.asDiagonal();
}

std::vector<std::vector<int>> all_sign_patterns(int d) {
  std::vector<std::vector<int>> out;
  for (int m = 0; m < (1 << d); ++m) {
    std::vector<int> s(d);
    for (int i = 0; i < d; ++i) s[i] = (m >> i) & 1 ? -1 : 1;
    out.push_back(s);
  }
  return out;
}

SectorSpec block12(BlockSignature second, double spread) {
  SectorSpec s;
  s.blocks = rootdata::BlockDecomposition({1, 2});
  BlockConstraint c0, c1;
  c0.signature = BlockSignature{1, 0};
  c1.signature = second;
  c1.max_log_spread = spread;
  s.constraints = {c0, c1};
  return s;
}

}  // namespace

TEST_CASE("spectral data of diagonal and identity forms") {
  auto s = spectral_data(diag({3, -2, 1}));
  CHECK(s.eigenvalues(0) == doctest::Approx(3));
  CHECK(s.eigenvalues(1) == doctest::Approx(-2));
  CHECK(s.eigenvalues(2) == doctest::Approx(1));
  CHECK(s.frame.determinant() == doctest::Approx(1.0));
  s = spectral_data(Matrix::Identity(3, 3));
  CHECK(s.gaps.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectral reconstruction round trip") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    Matrix a = gen::random_sl(3, rng);
    const Matrix q = a + a.transpose();
    const auto s = spectral_data(q);
    CHECK((s.frame * s.eigenvalues.asDiagonal() * s.frame.transpose() - q).norm() < 1e-10);
    for (int i = 0; i + 1 < 3; ++i) CHECK(std::abs(s.eigenvalues(i)) >= std::abs(s.eigenvalues(i + 1)));
  }
}

TEST_CASE("membership of diagonal forms") {
  const auto member = sector_membership(spectral_data(diag({3, -2, 1})), sign_pattern_spec({1, -1, 1}));
  REQUIRE(member.verdict == Verdict::member);
  REQUIRE(member.witness.has_value());
  CHECK(member.witness->a[0] == doctest::Approx(3));
  CHECK(member.witness->a[1] == doctest::Approx(2));
  CHECK(member.witness->a[2] == doctest::Approx(1));
  CHECK(sector_membership(spectral_data(diag({3, -2, 1})), sign_pattern_spec({1, 1, -1})).verdict ==
        Verdict::nonmember);
  CHECK(sector_membership(spectral_data(diag({1, 1, -1})), sign_pattern_spec({1, 1, -1})).verdict ==
        Verdict::degenerate);

  // blocks (1,2): a0 = 6 against the unit-determinant 2-block
  const auto b = sector_membership(spectral_data(diag({6, 2, 0.5})), block12({2, 0}, INFINITY));
  REQUIRE(b.verdict == Verdict::member);
  CHECK(b.witness->a[0] == doctest::Approx(6));
  CHECK(b.witness->a[1] == doctest::Approx(1));
  CHECK(sector_membership(spectral_data(diag({6, 2, 0.5})), block12({1, 1}, INFINITY)).verdict ==
        Verdict::nonmember);
  CHECK(sector_membership(spectral_data(diag({6, 2, 0.5})), block12({2, 0}, 1.0)).verdict == Verdict::nonmember);
}

TEST_CASE("witness determinants multiply back to det q") {
  const auto forms = enumerate::enumerate_all({3, 5.0, enumerate::Norm::max_entry, 1});
  std::vector<SectorSpec> specs;
  for (const auto& s : all_sign_patterns(3)) specs.push_back(sign_pattern_spec(s));
  specs.push_back(block12({1, 1}, INFINITY));
  specs.push_back(block12({2, 0}, 2.0));
  int members = 0;
  for (const auto& q : forms)
    for (const auto& spec : specs) {
      const auto r = sector_membership(q, spec);
      if (r.verdict != Verdict::member) continue;
      ++members;
      double prod = 1;
      for (std::size_t i = 0; i < r.witness->a.size(); ++i) {
        prod *= std::pow(r.witness->a[i], spec.blocks.dims()[i]) * r.witness->block_dets[i];
        CHECK(std::abs(r.witness->block_dets[i]) == 1);
      }
      CHECK(prod == doctest::Approx(static_cast<double>(q.det())).epsilon(1e-8));
    }
  CHECK(members > 0);
}

TEST_CASE("frame caps and their measure") {
  CHECK(FrameConstraint::full().measure() == 1.0);
  Eigen::Vector3d z(0, 0, 1);
  const auto half = FrameConstraint::cap(z, std::numbers::pi / 2);
  CHECK(half.measure() == doctest::Approx(1.0));
  CHECK_THROWS(FrameConstraint::cap(z, 0.0));
  CHECK_THROWS(FrameConstraint::cap(z, 4.0));

  // Haar Monte Carlo: the top column lies within angle of +-axis
  const double angle = 0.8;
  const auto cap = FrameConstraint::cap(z, angle);
  std::mt19937_64 rng(3);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const Matrix k = linalg::haar_rotation(3, rng);
    if (std::abs(k.col(0).dot(z)) >= std::cos(angle)) ++hits;
  }
  const double p = static_cast<double>(hits) / n;
  CHECK(std::abs(p - cap.measure()) < 4 * std::sqrt(p * (1 - p) / n));
  CHECK(cap.measure() == doctest::Approx(1 - std::cos(angle)).epsilon(1e-12));
}

TEST_CASE("parsing specs") {
  const rootdata::BlockDecomposition b({1, 2});
  auto c = parse_block_constraints("+,1:1", b);
  REQUIRE(c.size() == 2);
  CHECK(*c[0].signature == BlockSignature{1, 0});
  CHECK(*c[1].signature == BlockSignature{1, 1});
  c = parse_block_constraints("-,*", b);
  CHECK(*c[0].signature == BlockSignature{0, 1});
  CHECK_FALSE(c[1].signature.has_value());
  CHECK_THROWS(parse_block_constraints("+", b));
  CHECK_THROWS(parse_block_constraints("+,x", b));

  const auto f = parse_frame("cap:0,0,2:0.5", 3);
  CHECK(f.kind == FrameConstraint::Kind::cap);
  CHECK(f.axis.norm() == doctest::Approx(1.0));
  CHECK(parse_frame("full", 3).kind == FrameConstraint::Kind::full);
  CHECK_THROWS(parse_frame("cap:0,0:0.5", 3));
  CHECK_THROWS(parse_frame("ball", 3));

  auto bad = block12({2, 1}, INFINITY);
  CHECK_THROWS(bad.validate());
  CHECK(sign_pattern_spec({1, 1, -1}).digest() != sign_pattern_spec({1, -1, 1}).digest());
  CHECK(sign_pattern_spec({1, 1, -1}).digest() == sign_pattern_spec({1, 1, -1}).digest());
}

TEST_CASE("sign patterns partition the ball exactly") {
  std::vector<SectorSpec> specs;
  for (const auto& s : all_sign_patterns(3)) specs.push_back(sign_pattern_spec(s));
  const std::vector<double> grid{3, 4, 5, 6};
  const auto counts = count_sectors(3, grid, specs, 2);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double total = 0;
    for (const auto& s : counts.series) total += s.values[j];
    // the degenerate tally is the same for every sign pattern: degeneracy ignores signs
    total += counts.series.front().degenerate[j];
    for (const auto& s : counts.series) CHECK(s.degenerate[j] == counts.series.front().degenerate[j]);
    CHECK(total == static_cast<double>(counts.ball[j]));
  }
}

TEST_CASE("sector counts are monotone and bounded by the ball") {
  Eigen::Vector3d z(0, 0, 1);
  std::vector<SectorSpec> specs{sign_pattern_spec({1, 1, -1}),
                                sign_pattern_spec({1, 1, -1}, FrameConstraint::cap(z, 0.4)),
                                sign_pattern_spec({1, 1, -1}, FrameConstraint::cap(z, 0.9)),
                                block12({1, 1}, 2.0)};
  const std::vector<double> grid{4, 6, 8};
  const auto counts = count_sectors(3, grid, specs, 1);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (const auto& s : counts.series) {
      CHECK(s.values[j] <= static_cast<double>(counts.ball[j]));
      if (j > 0) CHECK(s.values[j] >= s.values[j - 1]);
    }
    CHECK(counts.series[1].values[j] <= counts.series[2].values[j]);
    CHECK(counts.series[2].values[j] <= counts.series[0].values[j]);
  }
  const auto single = count_sector(grid, specs[3], 3, 1);
  CHECK(single.values == counts.series[3].values);
  CHECK(single.spec_digest == specs[3].digest());

  std::vector<double> unsorted{6, 4};
  CHECK_THROWS(count_sectors(3, unsorted, specs, 1));
  auto fro = specs[0];
  fro.norm = Norm::frobenius;
  std::vector<SectorSpec> mixed{specs[0], fro};
  CHECK_THROWS(count_sectors(3, grid, mixed, 1));
}

TEST_CASE("membership is invariant under admissible column flips of the frame") {
  std::mt19937_64 rng(8);
  Eigen::Vector3d axis(0.3, -0.5, 0.8);
  const auto spec = sign_pattern_spec({1, -1, 1}, FrameConstraint::cap(axis.normalized(), 0.7));
  for (int t = 0; t < 200; ++t) {
    const Matrix k = linalg::haar_rotation(3, rng);
    Eigen::Vector3d lam(4.0, -2.0, 0.125);
    const auto s = spectral_from_parts(lam, k);
    const auto v0 = sector_membership(s, spec).verdict;
    for (int m : {3, 5, 6}) {
      Matrix flipped = k;
      for (int c = 0; c < 3; ++c)
        if ((m >> c) & 1) flipped.col(c) *= -1;
      CHECK(sector_membership(spectral_from_parts(lam, flipped), spec).verdict == v0);
    }
  }
}
