#include "symcount/quadratic_form.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace symcount::enumerate {

Norm parse_norm(const std::string& text) {
  if (text == "max" || text == "max-entry" || text == "max_entry") return Norm::max_entry;
  if (text == "frobenius" || text == "fro") return Norm::frobenius;
  throw std::invalid_argument("unknown norm '" + text + "' (expected max or frobenius)");
}

std::string to_string(Norm n) { return n == Norm::max_entry ? "max" : "frobenius"; }

int triangle_index(int d, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * d - i * (i - 1) / 2 + (j - i);
}

namespace {

Int128 det_rec(int n, const Int128* m) {
  if (n == 1) return m[0];
  if (n == 2) return m[0] * m[3] - m[1] * m[2];
  Int128 acc = 0;
  Int128 minor[16];
  for (int col = 0; col < n; ++col) {
    int idx = 0;
    for (int r = 1; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (c != col) minor[idx++] = m[r * n + c];
    const Int128 term = m[col] * det_rec(n - 1, minor);
    acc += (col % 2 == 0) ? term : -term;
  }
  return acc;
}

}  // namespace

Int128 triangle_determinant(int d, const std::int64_t* tri) {
  if (d < 1 || d > QuadraticForm::max_dim) throw std::invalid_argument("triangle_determinant: unsupported dimension");
  Int128 m[16];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[i * d + j] = tri[triangle_index(d, i, j)];
  return det_rec(d, m);
}

double form_norm(int d, const std::int64_t* tri, Norm norm) {
  const int n = d * (d + 1) / 2;
  if (norm == Norm::max_entry) {
    std::int64_t mx = 0;
    for (int t = 0; t < n; ++t) mx = std::max<std::int64_t>(mx, tri[t] < 0 ? -tri[t] : tri[t]);
    return static_cast<double>(mx);
  }
  double acc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const double v = static_cast<double>(tri[triangle_index(d, i, j)]);
      acc += (i == j ? 1.0 : 2.0) * v * v;
    }
  return std::sqrt(acc);
}

double matrix_norm(const linalg::Matrix& m, Norm norm) {
  return norm == Norm::max_entry ? m.cwiseAbs().maxCoeff() : m.norm();
}

QuadraticForm QuadraticForm::unchecked(int d, const Triangle& tri, Norm norm) {
  if (d < 1 || d > max_dim) throw std::invalid_argument("QuadraticForm: unsupported dimension");
  QuadraticForm q;
  q.d_ = d;
  q.tri_ = tri;
  for (int t = d * (d + 1) / 2; t < max_entries; ++t) q.tri_[t] = 0;
  const Int128 det = triangle_determinant(d, q.tri_.data());
  if (det > INT64_MAX || det < INT64_MIN) throw std::overflow_error("QuadraticForm: determinant overflow");
  q.det_ = static_cast<std::int64_t>(det);
  q.norm_ = form_norm(d, q.tri_.data(), norm);
  q.kind_ = norm;
  return q;
}

QuadraticForm::QuadraticForm(int d, const Triangle& tri, Norm norm) {
  *this = unchecked(d, tri, norm);
  if (det_ != 1 && det_ != -1) throw std::logic_error("QuadraticForm: determinant is not +-1");
}

QuadraticForm QuadraticForm::from_matrix(const Eigen::MatrixXd& m, Norm norm) {
  const int d = static_cast<int>(m.rows());
  if (m.rows() != m.cols()) throw std::invalid_argument("QuadraticForm::from_matrix: not square");
  Triangle tri{};
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const double v = m(i, j);
      if (v != std::round(v) || m(j, i) != v) throw std::invalid_argument("QuadraticForm::from_matrix: not a symmetric integer matrix");
      tri[triangle_index(d, i, j)] = static_cast<std::int64_t>(v);
    }
  return unchecked(d, tri, norm);
}

std::int64_t QuadraticForm::entry(int i, int j) const { return tri_[triangle_index(d_, i, j)]; }

linalg::Matrix QuadraticForm::matrix() const {
  linalg::Matrix m(d_, d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) m(i, j) = static_cast<double>(entry(i, j));
  return m;
}

std::string QuadraticForm::encode() const {
  std::ostringstream os;
  for (int t = 0; t < triangle_size(); ++t) os << (t ? "," : "") << tri_[t];
  return os.str();
}

std::size_t TriangleHash::operator()(const QuadraticForm::Triangle& t) const noexcept {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (auto v : t) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace symcount::enumerate
