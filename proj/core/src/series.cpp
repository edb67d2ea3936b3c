#include "symcount/series.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace symcount {

FitResult fit_exponent(const std::vector<double>& T_grid, const std::vector<double>& values, int b_fixed) {
  if (T_grid.size() != values.size()) throw std::invalid_argument("fit_exponent: grid and values differ in length");
  if (b_fixed < 1) throw std::invalid_argument("fit_exponent: b must be at least 1");
  std::vector<double> lt, lv;
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    if (values[i] > 0 && T_grid[i] > 1.0) {
      lt.push_back(std::log(T_grid[i]));
      lv.push_back(std::log(values[i]));
    }
  }
  const std::size_t n = lt.size();
  if (n < 4) throw std::invalid_argument("fit_exponent: insufficient data (need at least 4 positive points)");

  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = lt[i];
    y(i) = lv[i] - (b_fixed - 1) * std::log(lt[i]);
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  FitResult f;
  f.points = n;
  f.b_fixed = b_fixed;
  f.a_hat = coef(1);
  f.c_hat = std::exp(coef(0));
  const Eigen::VectorXd res = y - A * coef;
  f.residuals.assign(res.data(), res.data() + n);
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  const double ss_res = res.squaredNorm();
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : (ss_res == 0 ? 1.0 : 0.0);

  Eigen::MatrixXd B(n, 3);
  Eigen::VectorXd z(n);
  for (std::size_t i = 0; i < n; ++i) {
    B(i, 0) = 1.0;
    B(i, 1) = lt[i];
    B(i, 2) = std::log(lt[i]);
    z(i) = lv[i];
  }
  const Eigen::VectorXd free = B.colPivHouseholderQr().solve(z);
  f.c_free = std::exp(free(0));
  f.a_free = free(1);
  f.b_free = free(2) + 1.0;
  return f;
}

double tail_slope(const std::vector<double>& T_grid, const std::vector<double>& values) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < T_grid.size() && i < values.size(); ++i)
    if (values[i] > 0 && T_grid[i] > 0) idx.push_back(i);
  if (idx.size() < 2) return std::nan("");
  const std::size_t i = idx[idx.size() - 2], j = idx.back();
  return std::log(values[j] / values[i]) / std::log(T_grid[j] / T_grid[i]);
}

void CountSeries::refit(int b_fixed) {
  fit_b_fixed = b_fixed;
  fit = fit_exponent(T_grid, values, b_fixed);
}

nlohmann::json to_json(const FitResult& f) {
  return nlohmann::json{{"a_hat", f.a_hat},     {"c_hat", f.c_hat},   {"r2", f.r2},
                        {"b_fixed", f.b_fixed}, {"a_free", f.a_free}, {"b_free", f.b_free},
                        {"c_free", f.c_free},   {"points", f.points}, {"residuals", f.residuals}};
}

}  // namespace symcount
