#include "mixedconv/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mixedconv/error.hpp"

namespace mixedconv {

ExponentVector::ExponentVector(std::vector<double> entries)
    : entries_(std::move(entries)) {
  for (double p : entries_) {
    if (!(p > 0.0)) {
      throw InvalidArgument("Lebesgue exponents must lie in (0, inf]");
    }
  }
}

ExponentVector ExponentVector::uniform(int dim, double p) {
  return ExponentVector(std::vector<double>(dim, p));
}

ExponentVector ExponentVector::parse(const std::string& text) {
  std::vector<double> entries;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item == "inf" || item == "Inf" || item == "INF") {
      entries.push_back(kInf);
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw InvalidArgument("cannot parse exponent '" + item + "'");
    }
    entries.push_back(v);
  }
  if (entries.empty()) throw InvalidArgument("empty exponent list");
  return ExponentVector(std::move(entries));
}

bool ExponentVector::is_infinite(int k) const {
  return std::isinf(entries_[k]);
}

std::string ExponentVector::to_string() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (k) out << ',';
    if (std::isinf(entries_[k])) {
      out << "inf";
    } else {
      out << entries_[k];
    }
  }
  return out.str();
}

LatticeSequence LatticeSequence::delta(Lattice lattice, LatticeIndex at) {
  LatticeSequence a(std::move(lattice));
  a.set(at, 1.0);
  return a;
}

void LatticeSequence::set(const LatticeIndex& n, double value) {
  if (n.size() != static_cast<std::size_t>(dim())) {
    throw DimensionError("lattice index has wrong length");
  }
  if (!std::isfinite(value)) {
    throw InvalidArgument("sequence values must be finite");
  }
  if (value == 0.0) {
    values_.erase(n);
  } else {
    values_[n] = value;
  }
}

double LatticeSequence::operator()(const LatticeIndex& n) const {
  auto it = values_.find(n);
  return it == values_.end() ? 0.0 : it->second;
}

NormArray reduce_leading_axes(NormArray g, std::span<const double> exponents,
                              int count) {
  if (count < 0 || count > g.shape.rank() ||
      exponents.size() < static_cast<std::size_t>(count)) {
    throw DimensionError("reduce_leading_axes: bad axis count");
  }
  for (int step = 0; step < count; ++step) {
    const int n = g.shape.extents[0];
    const double h = g.widths[0];
    const double p = exponents[step];
    std::vector<int> rest(g.shape.extents.begin() + 1, g.shape.extents.end());
    Shape out_shape(rest);
    const std::size_t inner = out_shape.size();
    std::vector<double> acc(inner, 0.0);
    const double* src = g.values.data();

    if (std::isinf(p)) {
      for (int i = 0; i < n; ++i, src += inner)
        for (std::size_t r = 0; r < inner; ++r) acc[r] = std::max(acc[r], src[r]);
    } else if (p == 1.0) {
      for (int i = 0; i < n; ++i, src += inner)
        for (std::size_t r = 0; r < inner; ++r) acc[r] += src[r];
      for (auto& a : acc) a *= h;
    } else if (p == 2.0) {
      for (int i = 0; i < n; ++i, src += inner)
        for (std::size_t r = 0; r < inner; ++r) acc[r] += src[r] * src[r];
      for (auto& a : acc) a = std::sqrt(h * a);
    } else {
      // Powers are taken relative to the column maximum so large p cannot
      // underflow every term to zero.
      std::vector<double> top(inner, 0.0);
      for (const double* s = src; s != src + n * inner; s += inner)
        for (std::size_t r = 0; r < inner; ++r) top[r] = std::max(top[r], s[r]);
      for (int i = 0; i < n; ++i, src += inner)
        for (std::size_t r = 0; r < inner; ++r)
          if (top[r] > 0.0) acc[r] += std::pow(src[r] / top[r], p);
      const double inv = 1.0 / p;
      for (std::size_t r = 0; r < inner; ++r) acc[r] = top[r] * std::pow(h * acc[r], inv);
    }
    for (double a : acc) {
      if (!std::isfinite(a)) {
        std::ostringstream msg;
        msg << "mixed norm: non-finite value after reducing axis " << step + 1
            << " (p = " << p << ")";
        throw NumericError(msg.str());
      }
    }
    g.shape = std::move(out_shape);
    g.widths.erase(g.widths.begin());
    g.values = std::move(acc);
  }
  return g;
}

namespace {

template <class T>
double mixed_norm_impl(const BasicGridFunction<T>& f, const ExponentVector& p,
                       const Weight& omega) {
  if (p.size() != f.dim()) {
    throw DimensionError("mixed_norm: exponent vector has wrong length");
  }
  NormArray g;
  std::vector<int> extents;
  for (const auto& ax : f.axes()) {
    extents.push_back(ax.cells);
    g.widths.push_back(ax.width());
  }
  g.shape = Shape(extents);
  g.values.resize(g.shape.size());
  const bool weighted = !omega.is_constant();
  const bool single_period = g.shape.size() == f.size();
  if (single_period && !weighted) {
    auto samples = f.samples();
    for (std::size_t flat = 0; flat < g.values.size(); ++flat)
      g.values[flat] = std::abs(samples[flat]);
  } else {
    for (std::size_t flat = 0; flat < g.values.size(); ++flat) {
      auto idx = g.shape.unravel(flat);
      double value = std::abs(f.at(idx));
      if (weighted) value *= omega(f.basis().to_physical(f.midpoint(idx)));
      g.values[flat] = value;
    }
  }
  auto reduced = reduce_leading_axes(std::move(g), p.entries(), p.size());
  return reduced.values.front();
}

}  // namespace

double mixed_norm(const GridFunction& f, const ExponentVector& p,
                  const Weight& omega) {
  return mixed_norm_impl(f, p, omega);
}

double mixed_norm(const ComplexGridFunction& f, const ExponentVector& p,
                  const Weight& omega) {
  return mixed_norm_impl(f, p, omega);
}

double discrete_mixed_norm(const LatticeSequence& a, const ExponentVector& p,
                           const Weight& omega) {
  const int d = a.dim();
  if (p.size() != d) {
    throw DimensionError("discrete_mixed_norm: exponent vector has wrong length");
  }
  if (a.empty()) return 0.0;
  LatticeIndex lo = a.support().begin()->first;
  LatticeIndex hi = lo;
  for (const auto& [n, value] : a.support()) {
    for (int k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], n[k]);
      hi[k] = std::max(hi[k], n[k]);
    }
  }
  NormArray g;
  std::vector<int> extents;
  for (int k = 0; k < d; ++k) extents.push_back(static_cast<int>(hi[k] - lo[k] + 1));
  g.shape = Shape(extents);
  g.widths.assign(d, 1.0);
  g.values.assign(g.shape.size(), 0.0);
  std::vector<int> idx(d);
  Vector mid(d);
  for (const auto& [n, value] : a.support()) {
    for (int k = 0; k < d; ++k) {
      idx[k] = static_cast<int>(n[k] - lo[k]);
      mid[k] = static_cast<double>(n[k]) + 0.5;
    }
    double w = omega.is_constant()
                   ? 1.0
                   : omega(a.lattice().basis().to_physical(mid));
    g.values[g.shape.flat(idx)] = std::abs(value) * w;
  }
  return reduce_leading_axes(std::move(g), p.entries(), d).values.front();
}

bool validate_exponent_pair(const ExponentVector& p, const ExponentVector& r) {
  if (p.size() != r.size()) {
    throw DimensionError("validate_exponent_pair: dimension mismatch");
  }
  auto bound = running_min_exponent(p);
  for (int k = 0; k < p.size(); ++k) {
    if (r[k] > bound[k]) return false;
  }
  return true;
}

ExponentVector running_min_exponent(const ExponentVector& p) {
  std::vector<double> out;
  double m = 1.0;
  for (int k = 0; k < p.size(); ++k) {
    m = std::min(m, p[k]);
    out.push_back(m);
  }
  return ExponentVector(std::move(out));
}

}  // namespace mixedconv
