#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace symcount::cubature {

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t cells = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(const double* x)>;

// Adaptive integration over the box [lo, hi] in 1 to 3 dimensions.
// Dimension 1 uses Gauss-Kronrod 7/15; dimensions 2 and 3 use the Genz-Malik 7/5 rule.
Result integrate(const Integrand& f, const std::vector<double>& lo, const std::vector<double>& hi, double rel_tol,
                 double abs_tol, std::size_t max_cells);

}  // namespace symcount::cubature
