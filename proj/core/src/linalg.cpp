#include "symcount/linalg.hpp"
#include "symcount/parallel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace symcount {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

}  // namespace symcount

namespace symcount::linalg {

SymmetricEigen jacobi_eigen(const Matrix& s, double tol, int max_sweeps) {
  if (s.rows() != s.cols()) throw std::invalid_argument("jacobi_eigen: matrix must be square");
  const Eigen::Index n = s.rows();
  Matrix a = 0.5 * (s + s.transpose());
  Matrix v = Matrix::Identity(n, n);
  SymmetricEigen out;

  auto off_norm = [&] {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) acc += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(acc);
  };
  const double scale = a.norm();

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (scale == 0.0 || off_norm() <= tol * scale) {
      out.converged = true;
      break;
    }
    ++out.sweeps;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(tau) > 1e150) {
          t = 1.0 / (2.0 * tau);
        } else {
          t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (!out.converged && (scale == 0.0 || off_norm() <= tol * scale)) out.converged = true;
  out.values = a.diagonal();
  out.vectors = std::move(v);
  return out;
}

Matrix signature_matrix(int p, int q) {
  if (p < 0 || q < 0 || p + q < 1) throw std::invalid_argument("signature_matrix: bad signature");
  Vector diag(p + q);
  for (int i = 0; i < p + q; ++i) diag(i) = i < p ? 1.0 : -1.0;
  return diag.asDiagonal();
}

Matrix diagonal_sign_matrix(const std::vector<int>& signs) {
  Vector diag(static_cast<Eigen::Index>(signs.size()));
  for (std::size_t i = 0; i < signs.size(); ++i) diag(static_cast<Eigen::Index>(i)) = signs[i] > 0 ? 1.0 : -1.0;
  return diag.asDiagonal();
}

Matrix expm(const Matrix& x) { return x.exp(); }

Matrix logm(const Matrix& x) { return x.log(); }

double spectral_norm(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

double condition_number(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

Matrix haar_rotation(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (q.determinant() < 0) q.col(d - 1) *= -1.0;
  return q;
}

Matrix quaternion_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond quat(normal(rng), normal(rng), normal(rng), normal(rng));
  quat.normalize();
  return quat.toRotationMatrix();
}

Matrix plane_rotation(const Vector& v, const Vector& u) {
  const double c = u.dot(v);
  if (c <= -1.0 + 1e-12) throw std::domain_error("plane_rotation: antipodal vectors");
  const Eigen::Index d = v.size();
  Matrix w = u * v.transpose() - v * u.transpose();
  return Matrix::Identity(d, d) + w + (w * w) / (1.0 + c);
}

double max_principal_angle(const Matrix& a, const Matrix& b) {
  // sin of the largest angle is the norm of the component of b outside span(a)
  Matrix resid = b - a * (a.transpose() * b);
  double s = spectral_norm(resid);
  return std::asin(std::min(1.0, s));
}

}  // namespace symcount::linalg
