#pragma once

#include "symcount/linalg.hpp"

#include <span>
#include <string>
#include <vector>

namespace symcount::cartan {

using linalg::Matrix;
using linalg::Vector;

struct Signature {
  int p = 0;
  int q = 0;
  int d() const { return p + q; }
  bool operator==(const Signature&) const = default;
};

Signature parse_signature(const std::string& text);

struct CartanFactors {
  Matrix k;                // SO(d)
  Vector a;                // s_1 >= ... >= s_d > 0
  std::vector<int> w;      // +1 / -1 per slot
  Matrix h;                // h J h^T = J, det h = 1
  Vector margins;          // log(s_i / s_{i+1})
  Signature signature;
  bool ambiguous = false;  // some |eigenvalue| tie was broken by the sort rule
  int sweeps = 0;
};

struct DecomposeOptions {
  double det_tol = 1e-9;
  double max_condition = 1e12;
  double jacobi_tol = 1e-13;
  int max_sweeps = 100;
  double tie_tol = 1e-10;  // log-scale tie detection
};

// Signed permutation w~ with w~ J w~^T = diag(w), det w~ = +1.
Matrix weyl_representative(std::span<const int> w, Signature sig);

CartanFactors kah_decompose(const Matrix& g, Signature sig, const DecomposeOptions& opts = {});
Matrix reconstruct(const CartanFactors& f);

// Builds g = k diag(a) w~ h; a is renormalized to product one by the caller.
Matrix synthesize(const Matrix& k, const Vector& a, std::span<const int> w, const Matrix& h, Signature sig);

struct InvariantResiduals {
  double orthogonality = 0.0;  // ||k^T k - I||_F
  double det_k = 0.0;          // |det k - 1|
  double h_form = 0.0;         // ||h J h^T - J||_F
  double det_h = 0.0;          // |det h - 1|
  double product = 0.0;        // |prod s_i - 1|
  double min_margin = 0.0;
  bool signs_match = true;     // w has p pluses and q minuses
};

InvariantResiduals invariant_residuals(const CartanFactors& f);
// Empty when all invariants hold within the documented tolerances.
std::vector<std::string> invariant_violations(const CartanFactors& f);

enum class Regularity { regular, singular };

struct RegularityReport {
  Regularity classification = Regularity::singular;
  std::vector<double> margins;
  std::vector<int> failing;  // 0-based simple roots below c
};

// subset holds 0-based simple-root indices (alpha_1 is index 0).
RegularityReport regularity(const CartanFactors& f, double c, std::span<const int> subset);

// Sign-flips columns of f.k pairwise (det preserved) to best match reference, then recomputes h.
CartanFactors align_frame(const CartanFactors& f, const Matrix& reference_k);

}  // namespace symcount::cartan
