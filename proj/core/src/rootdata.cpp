#include "symcount/rootdata.hpp"

#include <Eigen/Dense>

#include <sstream>
#include <stdexcept>

namespace symcount::rootdata {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

const RestrictedRoot& RootDatum::root(int i, int j) const {
  for (const auto& r : roots)
    if (r.i == i && r.j == j) return r;
  throw std::out_of_range("RootDatum::root: no such root");
}

RootDatum build_root_datum(std::span<const int> signs) {
  const int d = static_cast<int>(signs.size());
  if (d < 2) throw std::invalid_argument("build_root_datum: d must be at least 2");
  RootDatum out;
  out.d = d;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (signs[i] != 1 && signs[i] != -1) throw std::invalid_argument("build_root_datum: signs must be +1 or -1");
    J(i, i) = signs[i];
    out.signs.push_back(signs[i]);
    (signs[i] > 0 ? out.p : out.q) += 1;
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(d, d);
      e(i, j) = 1.0;
      // sigma theta (X) = J X J acts on the root line spanned by E_ij
      const Eigen::MatrixXd image = J * e * J;
      RestrictedRoot r{i, j, 0, 0};
      if ((image - e).norm() == 0.0) {
        r.l_plus = 1;
      } else if ((image + e).norm() == 0.0) {
        r.l_minus = 1;
      } else {
        throw std::logic_error("build_root_datum: E_ij is not an eigenvector of sigma theta");
      }
      out.roots.push_back(r);
    }
  }
  for (int s = 0; s + 1 < d; ++s) {
    for (std::size_t idx = 0; idx < out.roots.size(); ++idx)
      if (out.roots[idx].i == s && out.roots[idx].j == s + 1) out.simple_roots.push_back(static_cast<int>(idx));
  }
  return out;
}

RootDatum build_root_datum(int d, int p, int q) {
  if (d < 2) throw std::invalid_argument("build_root_datum: d must be at least 2");
  if (p < 1 || q < 1 || p + q != d) throw std::invalid_argument("build_root_datum: invalid signature");
  std::vector<int> signs(d, 1);
  for (int i = p; i < d; ++i) signs[i] = -1;
  return build_root_datum(signs);
}

BlockDecomposition::BlockDecomposition(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("BlockDecomposition: no blocks");
  int acc = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (dims_[k] < 1) throw std::invalid_argument("BlockDecomposition: block dimensions must be positive");
    if (k > 0) cuts_.push_back(acc);
    acc += dims_[k];
  }
  d_ = acc;
}

int BlockDecomposition::block_of(int slot) const {
  if (slot < 0 || slot >= d_) throw std::out_of_range("BlockDecomposition::block_of");
  int b = 0;
  while (b < n() && slot >= cuts_[b]) ++b;
  return b;
}

std::vector<int> BlockDecomposition::interior_simple_roots() const {
  std::vector<int> out;
  for (int s = 0; s + 1 < d_; ++s)
    if (block_of(s) == block_of(s + 1)) out.push_back(s);
  return out;
}

BlockDecomposition blocks_from_subset(int d, std::span<const int> subset) {
  std::vector<bool> glued(d > 0 ? d - 1 : 0, false);
  for (int s : subset) {
    if (s < 0 || s >= d - 1) throw std::invalid_argument("blocks_from_subset: simple root index out of range");
    glued[s] = true;
  }
  std::vector<int> dims{1};
  for (int s = 0; s + 1 < d; ++s) {
    if (glued[s]) ++dims.back();
    else dims.push_back(1);
  }
  return BlockDecomposition(dims);
}

WeightCoefficients weight_coefficients(const BlockDecomposition& blocks) {
  WeightCoefficients w;
  const std::int64_t d = blocks.d();
  for (int ik : blocks.cuts()) {
    w.u.emplace_back(static_cast<std::int64_t>(ik) * (d - ik));
    w.m.emplace_back(2 * (d - ik), d);
  }
  return w;
}

ExponentPair exponents(std::span<const Rational> u, std::span<const Rational> m) {
  if (u.empty() || m.empty()) throw std::invalid_argument("exponents: empty input");
  if (u.size() != m.size()) throw std::invalid_argument("exponents: u and m differ in length");
  ExponentPair out;
  bool first = true;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (m[k] <= 0) throw std::invalid_argument("exponents: m must be positive");
    const Rational ratio = u[k] / m[k];
    if (first || ratio > out.a) {
      out.a = ratio;
      out.b = 1;
      first = false;
    } else if (ratio == out.a) {
      ++out.b;
    }
  }
  return out;
}

ExponentPair predict_exponent(const BlockDecomposition& blocks) {
  if (blocks.d() < 2) throw std::invalid_argument("predict_exponent: d must be at least 2");
  if (blocks.n() == 0) {
    const std::int64_t d = blocks.d();
    return ExponentPair{Rational(d * (d - 1), 2), 1, true};
  }
  const auto w = weight_coefficients(blocks);
  return exponents(w.u, w.m);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    int v = std::stoi(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("parse_int_list: bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace symcount::rootdata
