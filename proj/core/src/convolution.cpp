#include "mixedconv/convolution.hpp"

#include <cmath>
#include <sstream>

#include "mixedconv/error.hpp"

namespace mixedconv {
namespace {

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Per-term displacement in cells along every axis (zero on E0 axes).
std::vector<std::vector<std::int64_t>> shift_cells(const LatticeSequence& a,
                                                   const GridFunction& f,
                                                   const EchoSpec& echo) {
  std::vector<std::vector<std::int64_t>> out;
  const int d = f.dim();
  for (const auto& [j, value] : a.support()) {
    auto s = echo.line_shift(j);
    std::vector<std::int64_t> cells(d, 0);
    for (int l = 0; l < d; ++l) {
      if (echo.in_E0(l) || s[l] == 0.0) continue;
      auto c = f.axis(l).cells_for(s[l]);
      if (!c) {
        std::ostringstream msg;
        msg << "semi_discrete_convolve: shift " << s[l] << " on axis " << l + 1
            << " is not a whole number of cells (h = " << f.axis(l).width()
            << ")";
        throw AlignmentError(msg.str());
      }
      cells[l] = *c;
    }
    out.push_back(std::move(cells));
  }
  return out;
}

void check_compatible(const LatticeSequence& a, const GridFunction& f,
                      const EchoSpec& echo) {
  if (a.dim() != f.dim() || echo.dim() != f.dim()) {
    throw DimensionError("semi_discrete_convolve: dimension mismatch");
  }
  echo.check_axes(f.axes());
}

}  // namespace

LatticeSequence discrete_convolve(const LatticeSequence& a,
                                  const LatticeSequence& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("discrete_convolve: dimension mismatch");
  }
  std::map<LatticeIndex, CompensatedSum> acc;
  LatticeIndex n(a.dim());
  for (const auto& [m, am] : a.support()) {
    for (const auto& [k, bk] : b.support()) {
      for (int i = 0; i < a.dim(); ++i) n[i] = m[i] + k[i];
      acc[n].add(am * bk);
    }
  }
  LatticeSequence out(a.lattice());
  for (const auto& [idx, sum] : acc) out.set(idx, sum.value());
  return out;
}

std::vector<AxisSpec> convolution_region(const LatticeSequence& a,
                                         const GridFunction& f,
                                         const EchoSpec& echo) {
  check_compatible(a, f, echo);
  const int d = f.dim();
  auto cells = shift_cells(a, f, echo);
  std::vector<AxisSpec> region;
  for (int k = 0; k < d; ++k) {
    const auto& ax = f.axis(k);
    if (ax.is_periodic()) {
      region.push_back(AxisSpec::periodic(ax.cells, 1));
      continue;
    }
    std::int64_t lo = 0;
    std::int64_t hi = ax.cells;
    for (const auto& c : cells) {
      lo = std::max(lo, c[k]);
      hi = std::min(hi, ax.cells + c[k]);
    }
    if (hi <= lo) {
      std::ostringstream msg;
      msg << "convolution_region: the support of a spans more than the "
             "sampled window on axis "
          << k + 1;
      throw CoverageError(msg.str());
    }
    region.push_back(AxisSpec::line(static_cast<int>(hi - lo),
                                    ax.lo + lo * ax.width(),
                                    ax.lo + hi * ax.width()));
  }
  return region;
}

GridFunction semi_discrete_convolve(const LatticeSequence& a,
                                    const GridFunction& f,
                                    const EchoSpec& echo) {
  return semi_discrete_convolve(a, f, echo, convolution_region(a, f, echo));
}

GridFunction semi_discrete_convolve(const LatticeSequence& a,
                                    const GridFunction& f,
                                    const EchoSpec& echo,
                                    const std::vector<AxisSpec>& region) {
  check_compatible(a, f, echo);
  const int d = f.dim();
  if (region.size() != static_cast<std::size_t>(d)) {
    throw DimensionError("semi_discrete_convolve: region has wrong rank");
  }
  auto cells = shift_cells(a, f, echo);
  const auto& strides = f.shape().strides;

  // Offset of the region's first cell inside f, per axis.
  std::vector<std::int64_t> start(d, 0);
  for (int k = 0; k < d; ++k) {
    const auto& ax = f.axis(k);
    const auto& out_ax = region[k];
    if (ax.is_periodic()) {
      if (!out_ax.is_periodic() || out_ax.cells != ax.cells ||
          out_ax.periods != 1) {
        throw InvalidArgument(
            "semi_discrete_convolve: periodic region axes must match the grid");
      }
      continue;
    }
    if (out_ax.is_periodic()) {
      throw InvalidArgument("semi_discrete_convolve: region axis kind mismatch");
    }
    auto s = ax.cells_for(out_ax.lo - ax.lo);
    if (!s || std::abs(out_ax.width() - ax.width()) > 1e-12 * ax.width()) {
      throw AlignmentError(
          "semi_discrete_convolve: region is not aligned with the grid");
    }
    start[k] = *s;
    for (const auto& c : cells) {
      std::int64_t src_lo = start[k] - c[k];
      std::int64_t src_hi = src_lo + out_ax.cells;
      if (src_lo < 0 || src_hi > ax.cells) {
        std::ostringstream msg;
        msg << "semi_discrete_convolve: shifted evaluation on axis " << k + 1
            << " needs [" << ax.lo + src_lo * ax.width() << ", "
            << ax.lo + src_hi * ax.width() << "] but the window is [" << ax.lo
            << ", " << ax.hi << "]";
        throw CoverageError(msg.str());
      }
    }
  }

  std::vector<double> coeff;
  std::vector<std::ptrdiff_t> offset;
  std::size_t term = 0;
  for (const auto& [j, value] : a.support()) {
    std::ptrdiff_t off = 0;
    for (int k = 0; k < d; ++k)
      off += static_cast<std::ptrdiff_t>(start[k] - cells[term][k]) *
             static_cast<std::ptrdiff_t>(strides[k]);
    coeff.push_back(value);
    offset.push_back(off);
    ++term;
  }

  std::vector<int> extents;
  for (const auto& ax : region) extents.push_back(ax.size());
  Shape out_shape(extents);
  std::vector<double> out(out_shape.size(), 0.0);
  const auto samples = f.samples();

  std::vector<int> idx(d, 0);
  std::ptrdiff_t base = 0;
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    CompensatedSum sum;
    for (std::size_t t = 0; t < coeff.size(); ++t)
      sum.add(coeff[t] * samples[base + offset[t]]);
    out[flat] = sum.value();

    int k = d - 1;
    while (k >= 0) {
      ++idx[k];
      base += static_cast<std::ptrdiff_t>(strides[k]);
      if (idx[k] < extents[k]) break;
      base -= static_cast<std::ptrdiff_t>(strides[k]) * extents[k];
      idx[k] = 0;
      --k;
    }
  }
  return GridFunction(f.basis(), region, std::move(out));
}

}  // namespace mixedconv
