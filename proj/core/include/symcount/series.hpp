#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace symcount {

struct FitResult {
  double a_hat = 0.0;
  double c_hat = 0.0;  // N ~ c T^a (log T)^(b-1)
  double r2 = 0.0;
  int b_fixed = 1;
  std::vector<double> residuals;  // log N - model, per positive point
  // three-parameter diagnostic with free log power
  double a_free = 0.0;
  double b_free = 0.0;
  double c_free = 0.0;
  std::size_t points = 0;
};

FitResult fit_exponent(const std::vector<double>& T_grid, const std::vector<double>& values, int b_fixed);

// Tail slope d log N / d log T between the last two positive points.
double tail_slope(const std::vector<double>& T_grid, const std::vector<double>& values);

struct CountSeries {
  std::vector<double> T_grid;
  std::vector<double> values;
  std::vector<double> stderr_values;  // zero for exact counts
  std::vector<double> degenerate;     // degenerate tallies (counts only)
  std::string spec_digest;
  std::optional<FitResult> fit;
  int fit_b_fixed = 1;
  nlohmann::json manifest = nlohmann::json::object();

  void refit(int b_fixed);
};

nlohmann::json to_json(const FitResult& f);

}  // namespace symcount
