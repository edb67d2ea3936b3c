#include "symcount/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace symcount::cartan {

Signature parse_signature(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("signature must look like p,q");
  Signature s{std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  if (s.p < 0 || s.q < 0 || s.d() < 2) throw std::invalid_argument("signature: p, q must be nonnegative with p+q >= 2");
  return s;
}

Matrix weyl_representative(std::span<const int> w, Signature sig) {
  const int d = sig.d();
  if (static_cast<int>(w.size()) != d) throw std::invalid_argument("weyl_representative: length mismatch");
  Matrix P = Matrix::Zero(d, d);
  int next_pos = 0, next_neg = sig.p;
  for (int s = 0; s < d; ++s) {
    if (w[s] > 0) {
      if (next_pos >= sig.p) throw std::invalid_argument("weyl_representative: too many positive slots");
      P(s, next_pos++) = 1.0;
    } else {
      if (next_neg >= d) throw std::invalid_argument("weyl_representative: too many negative slots");
      P(s, next_neg++) = 1.0;
    }
  }
  if (P.determinant() < 0) P.row(d - 1) *= -1.0;
  return P;
}

namespace {

void check_square(const Matrix& g, Signature sig) {
  if (g.rows() != g.cols()) throw std::invalid_argument("kah_decompose: matrix must be square");
  if (g.rows() != sig.d()) throw std::invalid_argument("kah_decompose: signature does not match dimension");
  if (sig.p < 0 || sig.q < 0) throw std::invalid_argument("kah_decompose: bad signature");
  if (!g.allFinite()) throw std::invalid_argument("kah_decompose: non-finite entries");
}

}  // namespace

CartanFactors kah_decompose(const Matrix& g, Signature sig, const DecomposeOptions& opts) {
  check_square(g, sig);
  const int d = sig.d();
  const double det = g.determinant();
  if (!(std::abs(det - 1.0) <= opts.det_tol)) {
    std::ostringstream msg;
    msg << "kah_decompose: det(g) = " << det << " is not 1";
    throw std::invalid_argument(msg.str());
  }
  if (std::isfinite(opts.max_condition)) {
    const double cond = linalg::condition_number(g);
    if (!(cond <= opts.max_condition)) throw std::invalid_argument("kah_decompose: matrix too ill-conditioned");
  }

  std::vector<double> jd(d);
  for (int i = 0; i < d; ++i) jd[i] = i < sig.p ? 1.0 : -1.0;

  // Implicit Jacobi on S = X J X^T, rotating rows of X = V^T g.
  Matrix X = g;
  Matrix V = Matrix::Identity(d, d);
  auto jdot = [&](int r1, int r2) {
    double acc = 0.0;
    for (int c = 0; c < d; ++c) acc += jd[c] * X(r1, c) * X(r2, c);
    return acc;
  };
  int sweeps = 0;
  bool converged = false;
  for (; sweeps < opts.max_sweeps; ++sweeps) {
    bool rotated = false;
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const double a = jdot(p, p), b = jdot(q, q), c = jdot(p, q);
        if (std::abs(c) <= opts.jacobi_tol * std::sqrt(std::abs(a * b)) || std::abs(c) <= 1e-300) continue;
        rotated = true;
        const double tau = (b - a) / (2.0 * c);
        const double t = std::abs(tau) > 1e150
                             ? 1.0 / (2.0 * tau)
                             : (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (int col = 0; col < d; ++col) {
          const double xp = X(p, col), xq = X(q, col);
          X(p, col) = cs * xp - sn * xq;
          X(q, col) = sn * xp + cs * xq;
        }
        for (int row = 0; row < d; ++row) {
          const double vp = V(row, p), vq = V(row, q);
          V(row, p) = cs * vp - sn * vq;
          V(row, q) = sn * vp + cs * vq;
        }
      }
    }
    if (!rotated) {
      converged = true;
      break;
    }
  }
  if (!converged) throw std::runtime_error("kah_decompose: Jacobi iteration did not converge");

  std::vector<double> lambda(d);
  for (int i = 0; i < d; ++i) lambda[i] = jdot(i, i);
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    const double ax = std::abs(lambda[x]), ay = std::abs(lambda[y]);
    if (ax != ay) return ax > ay;
    return lambda[x] > 0 && lambda[y] < 0;
  });

  CartanFactors f;
  f.signature = sig;
  f.sweeps = sweeps;
  f.k.resize(d, d);
  Matrix Xs(d, d);
  f.a.resize(d);
  f.w.resize(d);
  int plus = 0;
  for (int s = 0; s < d; ++s) {
    const int src = order[s];
    f.k.col(s) = V.col(src);
    Xs.row(s) = X.row(src);
    const double lam = lambda[src];
    if (lam == 0.0) throw std::runtime_error("kah_decompose: singular form");
    f.a(s) = std::sqrt(std::abs(lam));
    f.w[s] = lam > 0 ? 1 : -1;
    plus += lam > 0;
  }
  if (plus != sig.p) throw std::runtime_error("kah_decompose: inertia does not match signature");
  if (f.k.determinant() < 0) {
    f.k.col(d - 1) *= -1.0;
    Xs.row(d - 1) *= -1.0;
  }
  const Matrix P = weyl_representative(f.w, sig);
  f.h = P.transpose() * (f.a.cwiseInverse().asDiagonal() * Xs);
  f.margins.resize(d - 1);
  for (int i = 0; i + 1 < d; ++i) {
    f.margins(i) = std::log(f.a(i) / f.a(i + 1));
    if (std::abs(f.margins(i)) <= opts.tie_tol) f.ambiguous = true;
  }
  return f;
}

Matrix synthesize(const Matrix& k, const Vector& a, std::span<const int> w, const Matrix& h, Signature sig) {
  return k * a.asDiagonal() * weyl_representative(w, sig) * h;
}

Matrix reconstruct(const CartanFactors& f) { return synthesize(f.k, f.a, f.w, f.h, f.signature); }

InvariantResiduals invariant_residuals(const CartanFactors& f) {
  const int d = f.signature.d();
  const Matrix J = linalg::signature_matrix(f.signature.p, f.signature.q);
  InvariantResiduals r;
  r.orthogonality = (f.k.transpose() * f.k - Matrix::Identity(d, d)).norm();
  r.det_k = std::abs(f.k.determinant() - 1.0);
  r.h_form = (f.h * J * f.h.transpose() - J).norm();
  r.det_h = std::abs(f.h.determinant() - 1.0);
  r.product = std::abs(f.a.prod() - 1.0);
  r.min_margin = f.margins.size() ? f.margins.minCoeff() : 0.0;
  int plus = 0;
  for (int s : f.w) plus += s > 0;
  r.signs_match = static_cast<int>(f.w.size()) == d && plus == f.signature.p;
  return r;
}

std::vector<std::string> invariant_violations(const CartanFactors& f) {
  const auto r = invariant_residuals(f);
  std::vector<std::string> out;
  if (r.orthogonality > 1e-10) out.emplace_back("k is not orthogonal");
  if (r.det_k > 1e-10) out.emplace_back("det k != 1");
  if (r.h_form > 1e-8) out.emplace_back("h J h^T != J");
  if (r.det_h > 1e-8) out.emplace_back("det h != 1");
  if (r.product > 1e-9) out.emplace_back("product of a differs from 1");
  if (r.min_margin < -1e-10) out.emplace_back("a is outside the positive chamber");
  if (!r.signs_match) out.emplace_back("w does not have signature (p,q)");
  return out;
}

RegularityReport regularity(const CartanFactors& f, double c, std::span<const int> subset) {
  if (!(c > 0)) throw std::invalid_argument("regularity: c must be positive");
  RegularityReport rep;
  rep.margins.assign(f.margins.data(), f.margins.data() + f.margins.size());
  for (int s : subset) {
    if (s < 0 || s >= static_cast<int>(f.margins.size())) throw std::invalid_argument("regularity: simple root out of range");
    if (f.margins(s) < c) rep.failing.push_back(s);
  }
  rep.classification = rep.failing.empty() ? Regularity::regular : Regularity::singular;
  return rep;
}

CartanFactors align_frame(const CartanFactors& f, const Matrix& reference_k) {
  const int d = f.signature.d();
  std::vector<double> dots(d);
  std::vector<int> flip(d, 1);
  int negatives = 0;
  for (int j = 0; j < d; ++j) {
    dots[j] = f.k.col(j).dot(reference_k.col(j));
    if (dots[j] < 0) {
      flip[j] = -1;
      ++negatives;
    }
  }
  if (negatives % 2 == 1) {
    int worst = 0;
    for (int j = 1; j < d; ++j)
      if (std::abs(dots[j]) < std::abs(dots[worst])) worst = j;
    flip[worst] = -flip[worst];
  }
  CartanFactors out = f;
  Vector D(d);
  for (int j = 0; j < d; ++j) D(j) = flip[j];
  out.k = f.k * D.asDiagonal();
  const Matrix P = weyl_representative(f.w, f.signature);
  out.h = P.transpose() * D.asDiagonal() * P * f.h;
  return out;
}

}  // namespace symcount::cartan
