#include "symcount/series.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace symcount;

namespace {

std::vector<double> planted(const std::vector<double>& T, double c, double a, int b) {
  std::vector<double> out;
  for (double t : T) out.push_back(c * std::pow(t, a) * std::pow(std::log(t), b - 1));
  return out;
}

}  // namespace

TEST_CASE("exact power laws are recovered") {
  const std::vector<double> T{10, 14, 20, 28, 40};
  auto f = fit_exponent(T, planted(T, 5, 3, 1), 1);
  CHECK(std::abs(f.a_hat - 3.0) < 1e-9);
  CHECK(std::abs(f.c_hat - 5.0) < 1e-8);
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.points == 5);
  for (double r : f.residuals) CHECK(std::abs(r) < 1e-9);

  f = fit_exponent(T, planted(T, 1, 2, 2), 2);
  CHECK(std::abs(f.a_hat - 2.0) < 1e-9);
  CHECK(f.b_fixed == 2);
}

TEST_CASE("planted exponents over random grids") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(0.5, 6.0), uc(0.1, 100.0), ut(2.0, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> T;
    double t = ut(rng);
    for (int i = 0; i < 6; ++i, t *= 1.3 + 0.1 * i) T.push_back(t);
    const double a = ua(rng), c = uc(rng);
    const int b = 1 + trial % 3;
    const auto f = fit_exponent(T, planted(T, c, a, b), b);
    CHECK(std::abs(f.a_hat - a) < 1e-9);
    CHECK(std::abs(f.c_hat - c) < 1e-7 * c);
  }
}

TEST_CASE("free log-power diagnostic") {
  std::vector<double> T;
  for (double t = 5; t < 5000; t *= 1.7) T.push_back(t);
  const auto f = fit_exponent(T, planted(T, 2, 1.5, 3), 1);
  CHECK(f.b_free == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(f.a_free == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("insufficient data is rejected") {
  CHECK_THROWS_WITH(fit_exponent({10, 20, 30}, {1, 2, 3}, 1), doctest::Contains("insufficient data"));
  CHECK_THROWS(fit_exponent({10, 20, 30, 40}, {0, 2, 3, 4}, 1));
  CHECK_THROWS(fit_exponent({10, 20, 30, 40}, {1, 2, 3}, 1));
  CHECK_NOTHROW(fit_exponent({10, 20, 30, 40, 50}, {0, 2, 3, 4, 5}, 1));
}

TEST_CASE("tail slope and refit") {
  const std::vector<double> T{10, 20, 40, 80};
  CHECK(tail_slope(T, planted(T, 1, 2.5, 1)) == doctest::Approx(2.5));
  CountSeries s;
  s.T_grid = T;
  s.values = planted(T, 3, 1.5, 2);
  s.refit(2);
  REQUIRE(s.fit.has_value());
  CHECK(std::abs(s.fit->a_hat - 1.5) < 1e-9);
  CHECK(s.fit_b_fixed == 2);
  const auto j = to_json(*s.fit);
  CHECK(j.contains("a_hat"));
  CHECK(j.contains("residuals"));
}
