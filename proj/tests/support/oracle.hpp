#pragma once

// Brute-force reference computations for the tests. Nothing here calls into
// the library's norm or convolution code; inputs are plain arrays and
// closed-form functions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Iterated norm of a row-major array (last axis fastest): the first axis is
/// integrated first with exponent p[0] and cell width h[0], then the next.
/// Written as a plain recursion over the outermost remaining axis.
inline double iterated_norm(const std::vector<double>& values,
                            const std::vector<int>& extents,
                            const std::vector<double>& h,
                            const std::vector<double>& p) {
  const int d = static_cast<int>(extents.size());
  // Evaluate the norm over axes 0..k-1 at a fixed tail (i_k, ..., i_{d-1}).
  std::function<double(int, std::vector<int>&)> level =
      [&](int k, std::vector<int>& idx) -> double {
    if (k == 0) {
      std::size_t flat = 0;
      for (int a = 0; a < d; ++a) flat = flat * extents[a] + idx[a];
      return std::abs(values[flat]);
    }
    const int axis = k - 1;
    double acc = 0.0;
    for (int i = 0; i < extents[axis]; ++i) {
      idx[axis] = i;
      double g = level(k - 1, idx);
      if (std::isinf(p[axis])) {
        acc = std::max(acc, g);
      } else {
        acc += h[axis] * std::pow(g, p[axis]);
      }
    }
    return std::isinf(p[axis]) ? acc : std::pow(acc, 1.0 / p[axis]);
  };
  std::vector<int> idx(d, 0);
  return level(d, idx);
}

using Sequence = std::map<std::vector<std::int64_t>, double>;

/// Plain l^p norm of the values (p may be infinite).
inline double lp(const Sequence& a, double p) {
  double acc = 0.0;
  for (const auto& [k, v] : a) {
    if (std::isinf(p)) {
      acc = std::max(acc, std::abs(v));
    } else {
      acc += std::pow(std::abs(v), p);
    }
  }
  return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

inline Sequence convolve(const Sequence& a, const Sequence& b) {
  Sequence out;
  for (const auto& [i, x] : a) {
    for (const auto& [j, y] : b) {
      std::vector<std::int64_t> k(i.size());
      for (std::size_t t = 0; t < i.size(); ++t) k[t] = i[t] + j[t];
      out[k] += x * y;
    }
  }
  return out;
}

/// Iterated l^{p} norm of a finitely supported sequence on Z^d, first
/// coordinate summed first, computed on the dense bounding box.
inline double iterated_lp(const Sequence& a, const std::vector<double>& p) {
  if (a.empty()) return 0.0;
  const int d = static_cast<int>(a.begin()->first.size());
  std::vector<std::int64_t> lo(d, std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> hi(d, std::numeric_limits<std::int64_t>::min());
  for (const auto& [k, v] : a) {
    for (int t = 0; t < d; ++t) {
      lo[t] = std::min(lo[t], k[t]);
      hi[t] = std::max(hi[t], k[t]);
    }
  }
  std::vector<int> extents(d);
  for (int t = 0; t < d; ++t) extents[t] = static_cast<int>(hi[t] - lo[t] + 1);
  std::size_t size = 1;
  for (int e : extents) size *= static_cast<std::size_t>(e);
  std::vector<double> dense(size, 0.0);
  for (const auto& [k, v] : a) {
    std::size_t flat = 0;
    for (int t = 0; t < d; ++t) flat = flat * extents[t] + static_cast<std::size_t>(k[t] - lo[t]);
    dense[flat] = v;
  }
  return iterated_norm(dense, extents, std::vector<double>(d, 1.0), p);
}

struct Trig {
  std::vector<int> freq;
  double amplitude;
  double phase;
};

/// Closed form of the nonnegative test functions
///
///   f(x) = prod_{l line} exp(-pi alpha_l (x_l + sum_{k periodic} c_{k,l} x_k - mu_l)^2)
///          * (offset + sum amp cos(2 pi <freq, x_periodic> + phase))
struct Generator {
  std::vector<bool> periodic;
  std::vector<double> alpha;
  std::vector<double> center;
  std::vector<std::vector<double>> shear;  // shear[k][l]
  std::vector<Trig> trig;
  double offset = 1.0;

  double operator()(const std::vector<double>& x) const {
    const std::size_t d = x.size();
    double value = 1.0;
    for (std::size_t l = 0; l < d; ++l) {
      if (periodic[l]) continue;
      double u = x[l] - center[l];
      for (std::size_t k = 0; k < d; ++k)
        if (periodic[k] && !shear.empty()) u += shear[k][l] * x[k];
      value *= std::exp(-std::numbers::pi * alpha[l] * u * u);
    }
    double t = offset;
    for (const auto& term : trig) {
      double arg = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        if (periodic[k]) arg += term.freq[k] * x[k];
      t += term.amplitude * std::cos(2.0 * std::numbers::pi * arg + term.phase);
    }
    return value * t;
  }
};

/// sum_j a(j) f(x - j) for a closed-form f (standard basis).
inline double convolve_at(const Sequence& a,
                          const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x) {
  double acc = 0.0;
  for (const auto& [j, v] : a) {
    std::vector<double> y(x);
    for (std::size_t t = 0; t < x.size(); ++t) y[t] -= static_cast<double>(j[t]);
    acc += v * f(y);
  }
  return acc;
}

/// One axis of a grid in plain numbers: midpoints lo + (i + 1/2)(hi - lo)/cells.
struct Axis {
  bool periodic = false;
  int cells = 1;
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return (hi - lo) / cells; }
  double midpoint(int i) const { return lo + (i + 0.5) * width(); }
};

/// Everything needed to recompute one point of an induction-trace stage.
struct TraceProblem {
  Generator f;
  Sequence a;
  std::vector<Axis> window;  // first period on periodic axes
  std::vector<Axis> region;  // output region of the convolution
  std::vector<double> p;
  std::vector<double> p0;    // running minimum of min(1, p)
  std::vector<std::vector<double>> shear;  // shear[j][l]
};

/// Iterated norm over axes 0..k-1 of |h(x_0..x_{k-1}, tail)|, with x on the
/// midpoints of `axes`.
inline double leading_norm(const std::function<double(const std::vector<double>&)>& h,
                           const std::vector<Axis>& axes, const std::vector<double>& p,
                           int k, const std::vector<double>& tail) {
  if (k == 0) return std::abs(h(tail));
  std::vector<int> extents(k);
  std::vector<double> widths;
  std::size_t size = 1;
  for (int i = 0; i < k; ++i) {
    extents[i] = axes[i].cells;
    widths.push_back(axes[i].width());
    size *= static_cast<std::size_t>(axes[i].cells);
  }
  std::vector<double> dense(size);
  std::vector<double> x(k + tail.size());
  for (std::size_t i = 0; i < tail.size(); ++i) x[k + i] = tail[i];
  for (std::size_t flat = 0; flat < size; ++flat) {
    std::size_t rest = flat;
    for (int i = k - 1; i >= 0; --i) {
      x[i] = axes[i].midpoint(static_cast<int>(rest % extents[i]));
      rest /= extents[i];
    }
    dense[flat] = std::abs(h(x));
  }
  return iterated_norm(dense, extents, widths, std::vector<double>(p.begin(), p.begin() + k));
}

/// (g_k(z), rhs_k(z)) for z on the remaining axes k..d-1 of the region:
///
///   g_k(z)   = iterated L^{p_1..p_k} norm of |a * f|(., z) over the region
///   f_k(w)   = iterated L^{p_1..p_k} norm of |f|(., w) over the window,
///              zero when a Line coordinate of w leaves the window
///   a_k(m)   = iterated l^{p0_1..p0_k} norm of |a|(., m)
///   rhs_k(z) = (sum_m f_k(z - phi_k(m))^q a_k(m)^q)^{1/q},  q = p0_k (1 at k = 0)
///
/// with phi_k(m)_l = m_l + sum_{j > l periodic} c_{j,l} m_j on Line axes and
/// zero on periodic axes.
inline std::pair<double, double> trace_point(const TraceProblem& P, int k,
                                             const std::vector<double>& z) {
  const int d = static_cast<int>(P.window.size());
  auto conv = [&](const std::vector<double>& x) { return convolve_at(P.a, P.f, x); };
  double g = leading_norm(conv, P.region, P.p, k, z);

  std::map<std::vector<std::int64_t>, Sequence> slices;
  for (const auto& [j, v] : P.a) {
    std::vector<std::int64_t> head(j.begin(), j.begin() + k);
    std::vector<std::int64_t> m(j.begin() + k, j.end());
    slices[m][head.empty() ? std::vector<std::int64_t>{0} : head] = v;
  }
  const double q = k == 0 ? 1.0 : P.p0[k - 1];
  double sum = 0.0;
  for (const auto& [m, slice] : slices) {
    double ak = k == 0 ? std::abs(slice.begin()->second)
                       : iterated_lp(slice, std::vector<double>(P.p0.begin(), P.p0.begin() + k));
    std::vector<double> w(z);
    bool inside = true;
    for (int i = 0; i < d - k; ++i) {
      const int l = k + i;
      if (P.window[l].periodic) continue;
      double phi = static_cast<double>(m[i]);
      for (int j = l + 1; j < d; ++j)
        if (P.window[j].periodic) phi += P.shear[j][l] * static_cast<double>(m[j - k]);
      w[i] -= phi;
      const double tol = 1e-9 * P.window[l].width();
      if (w[i] < P.window[l].lo - tol || w[i] > P.window[l].hi + tol) inside = false;
    }
    if (!inside || ak == 0.0) continue;
    double fk = leading_norm(P.f, P.window, P.p, k, w);
    sum += std::pow(fk, q) * std::pow(ak, q);
  }
  return {g, std::pow(sum, 1.0 / q)};
}

inline bool near_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace oracle
