#pragma once

// Static SVG figures built from report data.

#include <string>
#include <vector>

namespace mixedconv::tools {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  /// Draw markers (true) or a line (false).
  bool markers = true;
};

/// Log-log plot of one or more series.
std::string svg_loglog(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

/// Row-major heatmap of nonnegative values, with a linear colour scale.
std::string svg_heatmap(const std::vector<double>& values, int rows, int cols,
                        const std::string& title, const std::string& row_label,
                        const std::string& col_label);

/// Values against their index, with a horizontal reference line.
std::string svg_scatter(const std::vector<double>& values, double reference,
                        const std::string& title, const std::string& y_label);

}  // namespace mixedconv::tools
