#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace symcount::rootdata {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

struct RestrictedRoot {
  int i = 0;  // 0-based, i < j; the root is t_i - t_j
  int j = 0;
  int l_plus = 0;
  int l_minus = 0;
};

struct RootDatum {
  int d = 0;
  int p = 0;
  int q = 0;
  std::vector<int> signs;  // diagonal of J
  std::vector<RestrictedRoot> roots;
  std::vector<int> simple_roots;  // index into roots of alpha_i = t_i - t_{i+1}

  const RestrictedRoot& root(int i, int j) const;
};

// Standard J = diag(I_p, -I_q).
RootDatum build_root_datum(int d, int p, int q);
// Arbitrary diagonal J given by its signs.
RootDatum build_root_datum(std::span<const int> signs);

class BlockDecomposition {
 public:
  BlockDecomposition() = default;
  explicit BlockDecomposition(std::vector<int> dims);

  int d() const { return d_; }
  int n() const { return static_cast<int>(dims_.size()) - 1; }
  const std::vector<int>& dims() const { return dims_; }
  // cuts()[k-1] = i_k = dim W_0 + ... + dim W_{k-1}, k = 1..n
  const std::vector<int>& cuts() const { return cuts_; }
  int block_start(int b) const { return b == 0 ? 0 : cuts_[b - 1]; }
  int block_of(int slot) const;
  // 0-based simple roots alpha_s (s = slot boundary) lying inside a block
  std::vector<int> interior_simple_roots() const;

  bool operator==(const BlockDecomposition&) const = default;

 private:
  int d_ = 0;
  std::vector<int> dims_;
  std::vector<int> cuts_;
};

// Blocks determined by a subset I of 0-based simple roots: alpha_s in I glues slots s, s+1.
BlockDecomposition blocks_from_subset(int d, std::span<const int> subset);

struct WeightCoefficients {
  std::vector<Rational> u;
  std::vector<Rational> m;
};

WeightCoefficients weight_coefficients(const BlockDecomposition& blocks);

struct ExponentPair {
  Rational a;
  int b = 1;
  bool ball_case = false;
};

ExponentPair exponents(std::span<const Rational> u, std::span<const Rational> m);
ExponentPair predict_exponent(const BlockDecomposition& blocks);

std::vector<int> parse_int_list(const std::string& text);

}  // namespace symcount::rootdata
