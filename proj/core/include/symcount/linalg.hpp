#pragma once

#include <Eigen/Dense>

#include <random>

namespace symcount::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SymmetricEigen {
  Vector values;   // unsorted, aligned with columns of vectors
  Matrix vectors;  // orthogonal
  int sweeps = 0;
  bool converged = false;
};

// Cyclic two-sided Jacobi for small symmetric matrices.
SymmetricEigen jacobi_eigen(const Matrix& s, double tol = 1e-13, int max_sweeps = 100);

Matrix signature_matrix(int p, int q);
Matrix diagonal_sign_matrix(const std::vector<int>& signs);

Matrix expm(const Matrix& x);
// Principal logarithm; caller guarantees the spectrum avoids the closed negative axis.
Matrix logm(const Matrix& x);

double spectral_norm(const Matrix& x);
double condition_number(const Matrix& x);

// Haar-distributed element of SO(d).
Matrix haar_rotation(int d, std::mt19937_64& rng);
// Haar SO(3) through a random unit quaternion.
Matrix quaternion_rotation(std::mt19937_64& rng);

// Rotation in span(v, u) carrying unit v to unit u; requires u.v > -1.
Matrix plane_rotation(const Vector& v, const Vector& u);

// Largest principal angle between the column spans of two orthonormal blocks.
double max_principal_angle(const Matrix& a, const Matrix& b);

}  // namespace symcount::linalg
