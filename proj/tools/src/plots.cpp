#include "mixedconv_tools/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mixedconv::tools {
namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kLeft = 70;
constexpr int kRight = 20;
constexpr int kTop = 40;
constexpr int kBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& svg, const std::string& title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";
}

void axes_labels(std::ostringstream& svg, const std::string& x_label,
                 const std::string& y_label) {
  svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (kTop + kHeight - kBottom) / 2 << ")\">" << escape(y_label) << "</text>\n";
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  double map(double v, double a, double b) const {
    double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    return a + t * (b - a);
  }
};

}  // namespace

std::string svg_loglog(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  Range rx{1e300, -1e300}, ry{1e300, -1e300};
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      rx.lo = std::min(rx.lo, std::log10(s.x[i]));
      rx.hi = std::max(rx.hi, std::log10(s.x[i]));
      ry.lo = std::min(ry.lo, std::log10(s.y[i]));
      ry.hi = std::max(ry.hi, std::log10(s.y[i]));
    }
  }
  if (rx.lo > rx.hi) rx = {0.0, 1.0};
  if (ry.lo > ry.hi) ry = {0.0, 1.0};
  rx.lo = std::floor(rx.lo * 2) / 2 - 0.1;
  rx.hi = std::ceil(rx.hi * 2) / 2 + 0.1;
  ry.lo = std::floor(ry.lo * 2) / 2 - 0.1;
  ry.hi = std::ceil(ry.hi * 2) / 2 + 0.1;

  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;
  std::ostringstream svg;
  open_svg(svg, title);
  svg << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0
      << "\" height=\"" << y0 - y1 << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int e = static_cast<int>(std::ceil(rx.lo)); e <= rx.hi; ++e) {
    double px = rx.map(e, x0, x1);
    svg << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\""
        << y1 << "\" stroke=\"#ddd\"/>\n<text x=\"" << px << "\" y=\"" << y0 + 16
        << "\" text-anchor=\"middle\">" << fmt(std::pow(10.0, e)) << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ry.lo)); e <= ry.hi; ++e) {
    double py = ry.map(e, y0, y1);
    svg << "<line x1=\"" << x0 << "\" y1=\"" << py << "\" x2=\"" << x1 << "\" y2=\""
        << py << "\" stroke=\"#ddd\"/>\n<text x=\"" << x0 - 6 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\">" << fmt(std::pow(10.0, e)) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const char* colour = kPalette[s % 5];
    std::string points;
    for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
      if (!(ser.x[i] > 0.0) || !(ser.y[i] > 0.0)) continue;
      double px = rx.map(std::log10(ser.x[i]), x0, x1);
      double py = ry.map(std::log10(ser.y[i]), y0, y1);
      if (ser.markers) {
        svg << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"4\" fill=\"" << colour
            << "\"/>\n";
      }
      points += fmt(px) + "," + fmt(py) + " ";
    }
    if (!ser.markers) {
      svg << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << colour
          << "\" stroke-dasharray=\"5,4\"/>\n";
    }
    svg << "<text x=\"" << x0 + 10 << "\" y=\"" << y1 + 16 + 16 * static_cast<int>(s)
        << "\" fill=\"" << colour << "\">" << escape(ser.label) << "</text>\n";
  }
  axes_labels(svg, x_label, y_label);
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_heatmap(const std::vector<double>& values, int rows, int cols,
                        const std::string& title, const std::string& row_label,
                        const std::string& col_label) {
  double vmax = 0.0;
  for (double v : values)
    if (std::isfinite(v)) vmax = std::max(vmax, v);
  const double x0 = kLeft, x1 = kWidth - kRight - 60;
  const double y0 = kTop, y1 = kHeight - kBottom;
  const double cw = cols > 0 ? (x1 - x0) / cols : 0.0;
  const double ch = rows > 0 ? (y1 - y0) / rows : 0.0;
  std::ostringstream svg;
  open_svg(svg, title);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      std::size_t at = static_cast<std::size_t>(r) * cols + c;
      double v = at < values.size() ? values[at] : 0.0;
      double t = vmax > 0.0 && std::isfinite(v) ? v / vmax : 0.0;
      int red = static_cast<int>(255 * t);
      int blue = static_cast<int>(255 * (1.0 - t));
      svg << "<rect x=\"" << fmt(x0 + c * cw) << "\" y=\"" << fmt(y0 + r * ch)
          << "\" width=\"" << fmt(cw) << "\" height=\"" << fmt(ch) << "\" fill=\"rgb("
          << red << ",64," << blue << ")\"><title>" << fmt(v) << "</title></rect>\n";
    }
  }
  svg << "<text x=\"" << x1 + 8 << "\" y=\"" << y0 + 12 << "\">max " << fmt(vmax)
      << "</text>\n<text x=\"" << x1 + 8 << "\" y=\"" << y1 << "\">0</text>\n";
  axes_labels(svg, col_label, row_label);
  svg << "</svg>\n";
  return svg.str();
}

std::string svg_scatter(const std::vector<double>& values, double reference,
                        const std::string& title, const std::string& y_label) {
  Range ry{0.0, reference};
  for (double v : values)
    if (std::isfinite(v)) ry.hi = std::max(ry.hi, v);
  ry.hi *= 1.05;
  Range rx{0.0, static_cast<double>(std::max<std::size_t>(values.size(), 1))};
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;
  std::ostringstream svg;
  open_svg(svg, title);
  svg << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0
      << "\" height=\"" << y0 - y1 << "\" fill=\"none\" stroke=\"#444\"/>\n";
  double ref = ry.map(reference, y0, y1);
  svg << "<line x1=\"" << x0 << "\" y1=\"" << fmt(ref) << "\" x2=\"" << x1 << "\" y2=\""
      << fmt(ref) << "\" stroke=\"#d62728\" stroke-dasharray=\"5,4\"/>\n"
      << "<text x=\"" << x1 - 4 << "\" y=\"" << fmt(ref - 4)
      << "\" text-anchor=\"end\" fill=\"#d62728\">" << fmt(reference) << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    double v = ry.lo + (ry.hi - ry.lo) * t / 4.0;
    svg << "<text x=\"" << x0 - 6 << "\" y=\"" << fmt(ry.map(v, y0, y1) + 4)
        << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) continue;
    svg << "<circle cx=\"" << fmt(rx.map(i + 0.5, x0, x1)) << "\" cy=\""
        << fmt(ry.map(values[i], y0, y1)) << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
  }
  axes_labels(svg, "record", y_label);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mixedconv::tools
