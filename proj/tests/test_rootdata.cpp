#include "oracles.hpp"

#include "symcount/rootdata.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace symcount::rootdata;

TEST_CASE("root datum for signature (2,1)") {
  const auto rd = build_root_datum(3, 2, 1);
  REQUIRE(rd.roots.size() == 3);
  CHECK(rd.root(0, 1).l_plus == 1);
  CHECK(rd.root(0, 1).l_minus == 0);
  CHECK(rd.root(0, 2).l_plus == 0);
  CHECK(rd.root(0, 2).l_minus == 1);
  CHECK(rd.root(1, 2).l_plus == 0);
  CHECK(rd.root(1, 2).l_minus == 1);
  CHECK(rd.simple_roots.size() == 2);
}

TEST_CASE("root datum for signature (1,1)") {
  const auto rd = build_root_datum(2, 1, 1);
  REQUIRE(rd.roots.size() == 1);
  CHECK(rd.roots[0].l_plus == 0);
  CHECK(rd.roots[0].l_minus == 1);
}

TEST_CASE("multiplicities sum to the number of positive roots") {
  for (int d = 2; d <= 8; ++d)
    for (int q = 1; q < d; ++q) {
      const auto rd = build_root_datum(d, d - q, q);
      int total = 0;
      for (const auto& r : rd.roots) {
        CHECK(r.l_plus + r.l_minus == 1);
        total += r.l_plus + r.l_minus;
      }
      CHECK(total == d * (d - 1) / 2);
    }
}

TEST_CASE("swapping p and q preserves each multiplicity pair after relabeling") {
  for (int d = 2; d <= 7; ++d)
    for (int q = 1; q < d; ++q) {
      const auto a = build_root_datum(d, d - q, q);
      const auto b = build_root_datum(d, q, d - q);
      // slot s of J corresponds to slot d-1-s of -J reversed
      for (const auto& r : a.roots) {
        const auto& s = b.root(d - 1 - r.j, d - 1 - r.i);
        CHECK(r.l_plus == s.l_plus);
        CHECK(r.l_minus == s.l_minus);
      }
    }
}

TEST_CASE("arbitrary sign vectors") {
  const std::vector<int> signs{1, -1, 1, -1};
  const auto rd = build_root_datum(signs);
  for (const auto& r : rd.roots) CHECK(r.l_plus == (signs[r.i] == signs[r.j] ? 1 : 0));
}

TEST_CASE("invalid signatures are rejected") {
  CHECK_THROWS(build_root_datum(3, 3, 0));
  CHECK_THROWS(build_root_datum(3, 0, 3));
  CHECK_THROWS(build_root_datum(3, 1, 1));
  CHECK_THROWS(build_root_datum(3, -1, 4));
}

TEST_CASE("weight coefficients") {
  auto w = weight_coefficients(BlockDecomposition({1, 1, 1}));
  REQUIRE(w.u.size() == 2);
  CHECK(w.u[0] == Rational(2));
  CHECK(w.u[1] == Rational(2));
  CHECK(w.m[0] == Rational(4, 3));
  CHECK(w.m[1] == Rational(2, 3));

  w = weight_coefficients(BlockDecomposition({1, 2}));
  REQUIRE(w.u.size() == 1);
  CHECK(w.u[0] == Rational(2));
  CHECK(w.m[0] == Rational(4, 3));

  w = weight_coefficients(BlockDecomposition({1, 1, 1, 1}));
  REQUIRE(w.u.size() == 3);
  CHECK(w.u[0] / w.m[0] == Rational(2));
  CHECK(w.u[1] / w.m[1] == Rational(4));
  CHECK(w.u[2] / w.m[2] == Rational(6));
  CHECK(w.m[0] == Rational(3, 2));
  CHECK(w.m[2] == Rational(1, 2));
}

TEST_CASE("exponents from ratio lists") {
  std::vector<Rational> u{2, 2}, m{Rational(4, 3), Rational(2, 3)};
  auto e = exponents(u, m);
  CHECK(e.a == Rational(3));
  CHECK(e.b == 1);

  u = {1};
  m = {1};
  e = exponents(u, m);
  CHECK(e.a == Rational(1));
  CHECK(e.b == 1);

  u = {4, 4};
  m = {2, 2};
  e = exponents(u, m);
  CHECK(e.a == Rational(2));
  CHECK(e.b == 2);

  std::vector<Rational> empty;
  CHECK_THROWS(exponents(empty, empty));
  u = {1};
  m = {0};
  CHECK_THROWS(exponents(u, m));
  u = {1, 2};
  m = {1};
  CHECK_THROWS(exponents(u, m));
}

TEST_CASE("exponents are invariant under paired permutations") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(1, 12), den(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    std::vector<std::pair<Rational, Rational>> pairs;
    for (int i = 0; i < n; ++i) pairs.emplace_back(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    auto unzip = [](const auto& ps, std::vector<Rational>& u, std::vector<Rational>& m) {
      u.clear();
      m.clear();
      for (const auto& [a, b] : ps) {
        u.push_back(a);
        m.push_back(b);
      }
    };
    std::vector<Rational> u, m;
    unzip(pairs, u, m);
    const auto e0 = exponents(u, m);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    unzip(pairs, u, m);
    const auto e1 = exponents(u, m);
    CHECK(e0.a == e1.a);
    CHECK(e0.b == e1.b);
  }
}

TEST_CASE("predicted exponents for small decompositions") {
  auto e = predict_exponent(BlockDecomposition({1, 1, 1}));
  CHECK(e.a == Rational(3));
  CHECK(e.b == 1);
  CHECK_FALSE(e.ball_case);
  e = predict_exponent(BlockDecomposition({1, 2}));
  CHECK(e.a == Rational(3, 2));
  CHECK(e.b == 1);
  e = predict_exponent(BlockDecomposition({2, 2}));
  CHECK(e.a == Rational(4));
  CHECK(e.b == 1);
  e = predict_exponent(BlockDecomposition({3}));
  CHECK(e.ball_case);
  CHECK(e.a == Rational(3));
  CHECK_THROWS(predict_exponent(BlockDecomposition({1})));
}

TEST_CASE("exhaustive compositions agree with the closed form and the ratio-table oracle") {
  for (int d = 2; d <= 8; ++d)
    for (const auto& dims : oracle::compositions(d)) {
      if (dims.size() < 2) continue;
      const auto e = predict_exponent(BlockDecomposition(dims));
      CHECK(e.a == Rational(d * (d - dims.back()), 2));
      CHECK(e.b == 1);
      const auto o = oracle::ratio_table_max(dims);
      CHECK(e.a == Rational(o.num, o.den));
      CHECK(e.b == o.ties);
    }
}

TEST_CASE("block decompositions") {
  BlockDecomposition b({2, 1, 3});
  CHECK(b.d() == 6);
  CHECK(b.n() == 2);
  CHECK(b.cuts() == std::vector<int>{2, 3});
  CHECK(b.block_of(0) == 0);
  CHECK(b.block_of(2) == 1);
  CHECK(b.block_of(5) == 2);
  CHECK(b.interior_simple_roots() == std::vector<int>{0, 3, 4});
  CHECK_THROWS(BlockDecomposition(std::vector<int>{}));
  CHECK_THROWS(BlockDecomposition({1, 0}));

  const std::vector<int> I{0, 3, 4};
  CHECK(blocks_from_subset(6, I) == b);
  const std::vector<int> none;
  CHECK(blocks_from_subset(3, none) == BlockDecomposition({1, 1, 1}));
  const std::vector<int> bad{2};
  CHECK_THROWS(blocks_from_subset(3, bad));
}

TEST_CASE("rational formatting and list parsing") {
  CHECK(to_string(Rational(3)) == "3");
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(-1, 3)) == "-1/3");
  CHECK(parse_int_list("1,2,3") == std::vector<int>{1, 2, 3});
  CHECK(parse_int_list("").empty());
  CHECK_THROWS(parse_int_list("1,x"));
}
