#include "symcount/cubature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace symcount::cubature {

namespace {

struct Cell {
  std::vector<double> center;
  std::vector<double> half;
  double value = 0.0;
  double error = 0.0;
  int split_dim = 0;
  bool operator<(const Cell& o) const { return error < o.error; }
};

// 7-point Gauss / 15-point Kronrod on [-1, 1].
constexpr std::array<double, 8> kXk = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                                       0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                                       0.207784955007898468, 0.0};
constexpr std::array<double, 8> kWk = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                                       0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                                       0.204432940075298892, 0.209482141084727828};
constexpr std::array<double, 4> kWg = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                                       0.417959183673469388};

class Rule {
 public:
  explicit Rule(int n) : n_(n) {
    const double nn = n;
    w7_ = {(12824.0 - 9120.0 * nn + 400.0 * nn * nn) / 19683.0, 980.0 / 6561.0, (1820.0 - 400.0 * nn) / 19683.0,
           200.0 / 19683.0, 6859.0 / 19683.0 / std::pow(2.0, nn)};
    w5_ = {(729.0 - 950.0 * nn + 50.0 * nn * nn) / 729.0, 245.0 / 486.0, (265.0 - 100.0 * nn) / 1458.0, 25.0 / 729.0};
  }

  void apply(const Integrand& f, Cell& c, std::size_t& evals) const {
    if (n_ == 1) return apply_1d(f, c, evals);
    const double l2 = std::sqrt(9.0 / 70.0), l3 = std::sqrt(9.0 / 10.0), l4 = std::sqrt(9.0 / 10.0),
                 l5 = std::sqrt(9.0 / 19.0);
    std::vector<double> x(c.center);
    auto eval = [&] {
      ++evals;
      return f(x.data());
    };
    const double f0 = eval();
    double s2 = 0, s3 = 0, s4 = 0, s5 = 0;
    double best_diff = -1.0;
    int best_dim = 0;
    for (int i = 0; i < n_; ++i) {
      x[i] = c.center[i] - l2 * c.half[i];
      const double a = eval();
      x[i] = c.center[i] + l2 * c.half[i];
      const double b = eval();
      x[i] = c.center[i] - l3 * c.half[i];
      const double p = eval();
      x[i] = c.center[i] + l3 * c.half[i];
      const double q = eval();
      x[i] = c.center[i];
      s2 += a + b;
      s3 += p + q;
      const double diff = std::abs((a + b - 2 * f0) - (l2 * l2 / (l3 * l3)) * (p + q - 2 * f0));
      if (diff > best_diff) {
        best_diff = diff;
        best_dim = i;
      }
    }
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        for (int si : {-1, 1})
          for (int sj : {-1, 1}) {
            x[i] = c.center[i] + si * l4 * c.half[i];
            x[j] = c.center[j] + sj * l4 * c.half[j];
            s4 += eval();
            x[i] = c.center[i];
            x[j] = c.center[j];
          }
    for (int mask = 0; mask < (1 << n_); ++mask) {
      for (int i = 0; i < n_; ++i) x[i] = c.center[i] + (((mask >> i) & 1) ? l5 : -l5) * c.half[i];
      s5 += eval();
    }
    double vol = 1.0;
    for (double h : c.half) vol *= 2.0 * h;
    const double r7 = vol * (w7_[0] * f0 + w7_[1] * s2 + w7_[2] * s3 + w7_[3] * s4 + w7_[4] * s5);
    const double r5 = vol * (w5_[0] * f0 + w5_[1] * s2 + w5_[2] * s3 + w5_[3] * s4);
    c.value = r7;
    c.error = std::abs(r7 - r5);
    c.split_dim = best_dim;
  }

 private:
  void apply_1d(const Integrand& f, Cell& c, std::size_t& evals) const {
    double x;
    auto eval = [&](double t) {
      ++evals;
      x = c.center[0] + t * c.half[0];
      return f(&x);
    };
    const double fc = eval(0.0);
    double k = kWk[7] * fc, g = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
      const double s = eval(kXk[i]) + eval(-kXk[i]);
      k += kWk[i] * s;
      if (i % 2 == 1) g += kWg[i / 2] * s;
    }
    c.value = k * c.half[0];
    c.error = std::abs((k - g) * c.half[0]);
    c.split_dim = 0;
  }

  int n_;
  std::array<double, 5> w7_{};
  std::array<double, 4> w5_{};
};

}  // namespace

Result integrate(const Integrand& f, const std::vector<double>& lo, const std::vector<double>& hi, double rel_tol,
                 double abs_tol, std::size_t max_cells) {
  const int n = static_cast<int>(lo.size());
  if (n < 1 || n > 3 || hi.size() != lo.size()) throw std::invalid_argument("cubature: dimension must be 1, 2 or 3");
  Result out;
  for (int i = 0; i < n; ++i) {
    if (!(hi[i] >= lo[i])) throw std::invalid_argument("cubature: empty box");
    if (hi[i] == lo[i]) {
      out.converged = true;
      return out;
    }
  }
  Rule rule(n);
  Cell root;
  for (int i = 0; i < n; ++i) {
    root.center.push_back(0.5 * (lo[i] + hi[i]));
    root.half.push_back(0.5 * (hi[i] - lo[i]));
  }
  rule.apply(f, root, out.evaluations);
  std::priority_queue<Cell> heap;
  double total = root.value, err = root.error;
  heap.push(std::move(root));
  out.cells = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && out.cells < max_cells) {
    Cell c = heap.top();
    heap.pop();
    total -= c.value;
    err -= c.error;
    const int dim = c.split_dim;
    Cell a = c, b = c;
    a.half[dim] = b.half[dim] = 0.5 * c.half[dim];
    a.center[dim] = c.center[dim] - a.half[dim];
    b.center[dim] = c.center[dim] + b.half[dim];
    rule.apply(f, a, out.evaluations);
    rule.apply(f, b, out.evaluations);
    total += a.value + b.value;
    err += a.error + b.error;
    heap.push(std::move(a));
    heap.push(std::move(b));
    ++out.cells;
  }
  // re-sum to shed accumulated cancellation error
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = err;
  out.converged = err <= std::max(abs_tol, rel_tol * std::abs(total));
  return out;
}

}  // namespace symcount::cubature
