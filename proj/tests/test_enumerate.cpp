#include "oracles.hpp"

#include "symcount/enumerate.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace symcount::enumerate;
using Tri = QuadraticForm::Triangle;

namespace {

std::vector<Tri> triangles(const EnumerateOptions& opts) {
  std::vector<Tri> out;
  enumerate_forms(opts, [&](const QuadraticForm& q) { out.push_back(q.triangle()); });
  return out;
}

int positive_eigs(const QuadraticForm& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.matrix());
  return static_cast<int>((es.eigenvalues().array() > 0).count());
}

}  // namespace

TEST_CASE("entry bound and validation") {
  CHECK(entry_bound(1.5) == 1);
  CHECK(entry_bound(2.0) == 1);
  CHECK(entry_bound(2.0001) == 2);
  CHECK(entry_bound(1.0) == 0);
  CHECK_THROWS(validate({5, 3.0, Norm::max_entry, 1}));
  CHECK_THROWS(validate({1, 3.0, Norm::max_entry, 1}));
  CHECK_THROWS(validate({3, 0.5, Norm::max_entry, 1}));
  CHECK_THROWS(validate({3, std::nan(""), Norm::max_entry, 1}));
  CHECK_NOTHROW(validate({4, 2.0, Norm::frobenius, 1}));
}

TEST_CASE("quadratic form construction") {
  Tri t{};
  t = {1, 0, 0, 1, 0, -1};
  const QuadraticForm q(3, t, Norm::max_entry);
  CHECK(q.det() == -1);
  CHECK(q.entry(2, 2) == -1);
  CHECK(q.entry(1, 0) == 0);
  CHECK(q.norm() == 1.0);
  CHECK(q.matrix().determinant() == doctest::Approx(-1.0));
  Tri bad{2, 0, 0, 1, 0, 1};
  CHECK_THROWS(QuadraticForm(3, bad, Norm::max_entry));
  CHECK(QuadraticForm::unchecked(3, bad, Norm::max_entry).det() == 2);
  CHECK(QuadraticForm::from_matrix(q.matrix(), Norm::frobenius) == q);
  CHECK(!q.encode().empty());
  CHECK(triangle_index(3, 0, 0) == 0);
  CHECK(triangle_index(3, 1, 2) == 4);
  CHECK(triangle_index(3, 2, 1) == 4);
}

TEST_CASE("exact determinants agree with Laplace expansion") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(-9, 9);
  for (int d = 1; d <= 4; ++d)
    for (int t = 0; t < 200; ++t) {
      std::int64_t tri[10];
      std::vector<std::vector<long long>> m(d, std::vector<long long>(d));
      for (int i = 0, k = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++k) m[i][j] = m[j][i] = tri[k] = u(rng);
      CHECK(static_cast<long long>(triangle_determinant(d, tri)) == oracle::det_laplace(m));
    }
}

TEST_CASE("the brute-force 729-case scan matches enumeration exactly") {
  const auto brute = oracle::brute_forms(3, 1.5, Norm::max_entry);
  const auto fast = triangles({3, 1.5, Norm::max_entry, 1});
  CHECK(brute.size() == fast.size());
  CHECK(brute == fast);
}

TEST_CASE("brute-force scans agree for other dimensions, bounds and norms") {
  struct Case {
    int d;
    double T;
    Norm norm;
  };
  for (const Case c : {Case{2, 4.0, Norm::max_entry}, Case{2, 5.5, Norm::frobenius}, Case{3, 2.5, Norm::max_entry},
                       Case{3, 3.2, Norm::frobenius}, Case{4, 1.5, Norm::max_entry}, Case{4, 1.9, Norm::frobenius}}) {
    INFO("d=" << c.d << " T=" << c.T);
    const auto brute = oracle::brute_forms(c.d, c.T, c.norm);
    const auto fast = triangles({c.d, c.T, c.norm, 1});
    CHECK(brute == fast);
    CHECK(count_ball({c.d, c.T, c.norm, 2}) == brute.size());
  }
}

TEST_CASE("streaming order is identical for any thread count") {
  const auto one = triangles({3, 4.0, Norm::max_entry, 1});
  const auto three = triangles({3, 4.0, Norm::max_entry, 3});
  CHECK(one == three);
  CHECK(std::is_sorted(one.begin(), one.end()));
  for (const auto& t : one) CHECK(std::abs(static_cast<long long>(triangle_determinant(3, t.data()))) == 1);
}

TEST_CASE("ball counts over a grid match independent counts") {
  const std::vector<double> grid{2.0, 3.0, 4.5, 6.0};
  const auto counts = count_ball_grid(3, grid, Norm::max_entry, 2);
  for (std::size_t j = 0; j < grid.size(); ++j) CHECK(counts[j] == count_ball({3, grid[j], Norm::max_entry, 1}));
  CHECK(std::is_sorted(counts.begin(), counts.end()));
  std::vector<double> bad{3.0, 2.0};
  CHECK_THROWS(count_ball_grid(3, bad, Norm::max_entry, 1));
  CHECK(first_threshold_above(grid, 3.0) == 2);
  CHECK(first_threshold_above(grid, 1.0) == 0);
  CHECK(first_threshold_above(grid, 7.0) == 4);
}

TEST_CASE("orbit enumeration stays inside the matching-determinant enumeration") {
  const double T = 4.0;
  const auto all = enumerate_all({3, T, Norm::max_entry, 1});
  std::set<Tri> universe;
  for (const auto& q : all) universe.insert(q.triangle());

  std::vector<QuadraticForm> seeds;
  seeds.emplace_back(3, Tri{1, 0, 0, 1, 0, 1}, Norm::max_entry);
  seeds.emplace_back(3, Tri{1, 0, 0, 1, 0, -1}, Norm::max_entry);
  seeds.emplace_back(3, Tri{0, 1, 0, 0, 0, 1}, Norm::max_entry);
  seeds.emplace_back(3, Tri{-1, 0, 0, -1, 0, -1}, Norm::max_entry);
  seeds.emplace_back(3, Tri{2, 1, 0, 1, 0, 1}, Norm::max_entry);
  for (const auto& q0 : seeds) {
    const auto orbit = orbit_enumerate(q0, T, {3.0, 200000});
    CHECK_FALSE(orbit.forms.empty());
    for (const auto& q : orbit.forms) {
      CHECK(universe.count(q.triangle()) == 1);
      CHECK(q.det() == q0.det());
      CHECK(positive_eigs(q) == positive_eigs(q0));
      CHECK(q.norm() < T);
    }
    CHECK(std::is_sorted(orbit.forms.begin(), orbit.forms.end(),
                         [](const QuadraticForm& a, const QuadraticForm& b) { return a.triangle() < b.triangle(); }));
    CHECK(std::find(orbit.forms.begin(), orbit.forms.end(), q0) != orbit.forms.end());
  }
  const auto tiny = orbit_enumerate(seeds[1], T, {4.0, 10});
  CHECK(tiny.partial);
  CHECK_THROWS(orbit_enumerate(QuadraticForm::unchecked(3, Tri{2, 0, 0, 1, 0, 1}, Norm::max_entry), T));
}

TEST_CASE("definite and indefinite orbits partition the enumeration by signature") {
  const double T = 3.0;
  const auto all = enumerate_all({3, T, Norm::max_entry, 1});
  std::size_t by_sig[4] = {0, 0, 0, 0};
  for (const auto& q : all) ++by_sig[positive_eigs(q)];
  CHECK(by_sig[0] + by_sig[1] + by_sig[2] + by_sig[3] == all.size());
  const auto pos = orbit_enumerate(QuadraticForm(3, Tri{1, 0, 0, 1, 0, 1}, Norm::max_entry), T, {6.0, 500000});
  // every positive definite unimodular ternary form is equivalent to the identity
  CHECK(pos.forms.size() <= by_sig[3]);
}
