#pragma once

#include <string>
#include <vector>

namespace symcount::cli {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained log-log plot; non-positive points are skipped.
std::string loglog_svg(const std::string& title, const std::vector<PlotSeries>& series);

}  // namespace symcount::cli
