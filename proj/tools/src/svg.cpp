#include "svg.hpp"

#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace symcount::cli {
namespace {

constexpr double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 50;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string loglog_svg(const std::string& title, const std::vector<PlotSeries>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
      x0 = std::min(x0, std::log10(s.x[i]));
      x1 = std::max(x1, std::log10(s.x[i]));
      y0 = std::min(y0, std::log10(s.y[i]));
      y1 = std::max(y1, std::log10(s.y[i]));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
  const double px = (x1 - x0) * 0.05, py = (y1 - y0) * 0.05;
  x0 -= px, x1 += px, y0 -= py, y1 += py;

  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double lx) { return left + (lx - x0) / (x1 - x0) * pw; };
  auto sy = [&](double ly) { return top + (y1 - ly) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = static_cast<int>(std::ceil(x0)); k <= static_cast<int>(std::floor(x1)); ++k)
    os << "<text x=\"" << fmt(sx(k)) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">1e" << k
       << "</text>\n";
  for (int k = static_cast<int>(std::ceil(y0)); k <= static_cast<int>(std::floor(y1)); ++k)
    os << "<text x=\"" << left - 6 << "\" y=\"" << fmt(sy(k) + 4) << "\" text-anchor=\"end\">1e" << k
       << "</text>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">T</text>\n";

  double legend_y = top + 16;
  for (const auto& s : series) {
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
      const double cx = sx(std::log10(s.x[i])), cy = sy(std::log10(s.y[i]));
      pts << fmt(cx) << "," << fmt(cy) << " ";
      os << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"" << pts.str() << "\"/>\n";
    os << "<text x=\"" << left + 10 << "\" y=\"" << legend_y << "\" fill=\"" << s.color << "\">" << escape(s.label)
       << "</text>\n";
    legend_y += 16;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace symcount::cli
