#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace qsocket::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    switch (c) {
      case '<': r += "&lt;"; break;
      case '>': r += "&gt;"; break;
      case '&': r += "&amp;"; break;
      default: r += c;
    }
  }
  return r;
}

}  // namespace

void write_log_plot_svg(std::ostream& out, const LogPlot& plot) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.y[i] > 0.0) || !std::isfinite(s.x[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (plot.reference_y && *plot.reference_y > 0.0) {
    y_lo = std::min(y_lo, *plot.reference_y);
    y_hi = std::max(y_hi, *plot.reference_y);
  }
  if (!std::isfinite(x_lo)) { x_lo = 0.0; x_hi = 1.0; y_lo = 0.1; y_hi = 1.0; }
  if (x_hi == x_lo) { x_lo -= 1.0; x_hi += 1.0; }
  const int d_lo = static_cast<int>(std::floor(std::log10(y_lo)));
  int d_hi = static_cast<int>(std::ceil(std::log10(y_hi)));
  if (d_hi == d_lo) ++d_hi;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return kTop + (d_hi - std::log10(y)) / (d_hi - d_lo) * ph; };

  fmt::print(out,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
             "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
             kWidth, kHeight);
  fmt::print(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::print(out, "<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
             kLeft + pw / 2, escape(plot.title));

  for (int d = d_lo; d <= d_hi; ++d) {
    const double y = py(std::pow(10.0, d));
    fmt::print(out,
               "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n",
               kLeft, y, kLeft + pw, y);
    fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">1e{}</text>\n", kLeft - 6,
               y + 4, d);
  }
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
    const double x = px(xv);
    fmt::print(out,
               "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n",
               x, kTop, x, kTop + ph);
    fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.4g}</text>\n", x,
               kTop + ph + 18, xv);
  }
  fmt::print(out,
             "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
             "stroke=\"black\"/>\n",
             kLeft, kTop, pw, ph);
  fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
             kLeft + pw / 2, kHeight - 16, escape(plot.x_label));
  fmt::print(out,
             "<text x=\"18\" y=\"{:.1f}\" text-anchor=\"middle\" "
             "transform=\"rotate(-90 18 {:.1f})\">{}</text>\n",
             kTop + ph / 2, kTop + ph / 2, escape(plot.y_label));

  double legend_y = kTop + 10;
  if (plot.reference_y && *plot.reference_y > 0.0) {
    const double y = py(*plot.reference_y);
    fmt::print(out,
               "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"gray\" "
               "stroke-dasharray=\"6 4\"/>\n",
               kLeft, y, kLeft + pw, y);
    fmt::print(out,
               "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"gray\" "
               "stroke-dasharray=\"6 4\"/>\n",
               kLeft + pw + 12, legend_y, kLeft + pw + 36, legend_y);
    fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", kLeft + pw + 42, legend_y + 4,
               escape(plot.reference_label));
    legend_y += 20;
  }

  for (const auto& s : plot.series) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (s.y[i] > 0.0 && std::isfinite(s.x[i])) pts.emplace_back(s.x[i], s.y[i]);
    }
    std::stable_sort(pts.begin(), pts.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    fmt::print(out, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"",
               s.color);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      fmt::print(out, "{}{:.2f},{:.2f}", i ? " " : "", px(pts[i].first), py(pts[i].second));
    }
    out << "\"/>\n";
    for (const auto& [x, y] : pts) {
      fmt::print(out, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n", px(x), py(y),
                 s.color);
    }
    fmt::print(out,
               "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" "
               "stroke-width=\"1.5\"/>\n",
               kLeft + pw + 12, legend_y, kLeft + pw + 36, legend_y, s.color);
    fmt::print(out, "<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", kLeft + pw + 42, legend_y + 4,
               escape(s.label));
    legend_y += 20;
  }
  out << "</svg>\n";
}

}  // namespace qsocket::cli
