#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qsocket::cli {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;   // must be > 0; non-positive points are dropped
};

struct LogPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::optional<double> reference_y;   // dashed horizontal line
  std::string reference_label;
};

/// Static SVG line plot with a linear x axis and a decade-ticked log y axis.
void write_log_plot_svg(std::ostream& out, const LogPlot& plot);

}  // namespace qsocket::cli
