#pragma once

#include "symcount/linalg.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>

namespace symcount::enumerate {

enum class Norm { max_entry, frobenius };

Norm parse_norm(const std::string& text);
std::string to_string(Norm n);

__extension__ typedef __int128 Int128;

// Exact determinant of a symmetric integer matrix given as a row-major upper triangle.
Int128 triangle_determinant(int d, const std::int64_t* tri);

class QuadraticForm {
 public:
  static constexpr int max_dim = 4;
  static constexpr int max_entries = max_dim * (max_dim + 1) / 2;
  using Triangle = std::array<std::int64_t, max_entries>;

  QuadraticForm() = default;
  // Throws unless the determinant is exactly +1 or -1.
  QuadraticForm(int d, const Triangle& tri, Norm norm);
  // Accepts any determinant (used for non-unimodular test inputs).
  static QuadraticForm unchecked(int d, const Triangle& tri, Norm norm);
  static QuadraticForm from_matrix(const Eigen::MatrixXd& m, Norm norm);

  int dim() const { return d_; }
  std::int64_t entry(int i, int j) const;
  const Triangle& triangle() const { return tri_; }
  int triangle_size() const { return d_ * (d_ + 1) / 2; }
  std::int64_t det() const { return det_; }
  double norm() const { return norm_; }
  Norm norm_kind() const { return kind_; }
  linalg::Matrix matrix() const;
  std::string encode() const;

  bool operator==(const QuadraticForm& o) const { return d_ == o.d_ && tri_ == o.tri_; }

 private:
  int d_ = 0;
  Triangle tri_{};
  std::int64_t det_ = 0;
  double norm_ = 0.0;
  Norm kind_ = Norm::max_entry;
};

double form_norm(int d, const std::int64_t* tri, Norm norm);
double matrix_norm(const linalg::Matrix& m, Norm norm);

struct TriangleHash {
  std::size_t operator()(const QuadraticForm::Triangle& t) const noexcept;
};

int triangle_index(int d, int i, int j);

}  // namespace symcount::enumerate
