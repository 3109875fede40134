#include "mixedconv/echo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mixedconv/error.hpp"

namespace mixedconv {

EchoSpec::EchoSpec(OrderedBasis basis, std::vector<bool> periodic,
                   std::vector<std::vector<double>> echo_vectors)
    : basis_(std::move(basis)),
      periodic_(std::move(periodic)),
      vectors_(std::move(echo_vectors)) {
  const int d = basis_.dim();
  if (periodic_.size() != static_cast<std::size_t>(d)) {
    throw DimensionError("EchoSpec: E0 flags have wrong length");
  }
  if (vectors_.empty()) vectors_.assign(d, std::vector<double>(d, 0.0));
  if (vectors_.size() != static_cast<std::size_t>(d)) {
    throw DimensionError("EchoSpec: need one echo vector slot per axis");
  }
  for (int k = 0; k < d; ++k) {
    auto& v = vectors_[k];
    if (v.empty()) v.assign(d, 0.0);
    if (v.size() != static_cast<std::size_t>(d)) {
      throw DimensionError("EchoSpec: echo vector has wrong length");
    }
    for (int l = 0; l < d; ++l) {
      if (v[l] == 0.0) continue;
      if (!std::isfinite(v[l])) {
        throw InvalidArgument("EchoSpec: echo vector entries must be finite");
      }
      bool allowed = periodic_[k] && l <= k && !periodic_[l];
      if (!allowed) {
        std::ostringstream msg;
        msg << "EchoSpec: v_" << k + 1 << " has a component on e_" << l + 1
            << " outside M_" << k + 1;
        throw InvalidArgument(msg.str());
      }
    }
  }
}

EchoSpec EchoSpec::periodic(OrderedBasis basis, std::vector<bool> periodic) {
  return EchoSpec(std::move(basis), std::move(periodic), {});
}

std::vector<int> EchoSpec::M(int k) const {
  std::vector<int> out;
  for (int l = 0; l <= k; ++l)
    if (!periodic_[l]) out.push_back(l);
  return out;
}

bool EchoSpec::is_periodic_class() const {
  for (const auto& v : vectors_)
    for (double c : v)
      if (c != 0.0) return false;
  return true;
}

std::vector<double> EchoSpec::line_shift(const LatticeIndex& j) const {
  const int d = dim();
  if (j.size() != static_cast<std::size_t>(d)) {
    throw DimensionError("line_shift: index has wrong length");
  }
  std::vector<double> s(d, 0.0);
  for (int l = 0; l < d; ++l) {
    if (periodic_[l]) continue;
    double value = static_cast<double>(j[l]);
    for (int k = 0; k < d; ++k)
      if (periodic_[k]) value += static_cast<double>(j[k]) * vectors_[k][l];
    s[l] = value;
  }
  return s;
}

void EchoSpec::check_axes(const std::vector<AxisSpec>& axes) const {
  if (axes.size() != periodic_.size()) {
    throw DimensionError("EchoSpec: axis count does not match");
  }
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (axes[k].is_periodic() != periodic_[k]) {
      std::ostringstream msg;
      msg << "axis " << k + 1 << " must be "
          << (periodic_[k] ? "Periodic (e_k in E0)" : "Line (e_k not in E0)");
      throw InvalidArgument(msg.str());
    }
  }
}

namespace {

template <class T>
EchoCheck verify_echo_impl(const BasicGridFunction<T>& f, const EchoSpec& spec,
                           double tol) {
  spec.check_axes(f.axes());
  const int d = f.dim();
  const double scale = 1.0 + f.max_abs();
  EchoCheck out;
  for (int k = 0; k < d; ++k) {
    if (!spec.in_E0(k)) continue;
    const auto& axk = f.axis(k);
    const auto& v = spec.echo_vector(k);

    // Cell offsets of x + v_k on the Line axes.
    std::vector<std::int64_t> v_cells(d, 0);
    for (int l = 0; l < d; ++l) {
      if (v[l] == 0.0) continue;
      auto c = f.axis(l).cells_for(v[l]);
      if (!c) {
        std::ostringstream msg;
        msg << "verify_echo: v_" << k + 1 << " is not aligned with axis "
            << l + 1;
        throw AlignmentError(msg.str());
      }
      v_cells[l] = *c;
    }
    const bool wrap = axk.periods == 1;

    std::size_t compared_here = 0;
    std::vector<int> a(d), b(d);
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
      auto idx = f.shape().unravel(flat);
      a = idx;
      b = idx;
      a[k] += axk.cells;
      if (wrap) {
        a[k] %= axk.size();
      } else if (a[k] >= axk.size()) {
        continue;
      }
      bool inside = true;
      for (int l = 0; l < d && inside; ++l) {
        b[l] += static_cast<int>(v_cells[l]);
        if (b[l] < 0 || b[l] >= f.axis(l).size()) inside = false;
      }
      if (!inside) continue;
      double residual = std::abs(std::abs(f.at(a)) - std::abs(f.at(b)));
      ++compared_here;
      if (out.worst_axis < 0 || residual > out.worst_residual) {
        out.worst_residual = residual;
        out.worst_axis = k;
        out.worst_cell = idx;
      }
    }
    if (compared_here == 0) {
      std::ostringstream msg;
      msg << "verify_echo: no stored cell has both x+e_" << k + 1
          << " and x+v_" << k + 1 << " inside the window";
      throw CoverageError(msg.str());
    }
    out.compared += compared_here;
  }
  out.pass = out.worst_residual <= tol * scale;
  return out;
}

}  // namespace

EchoCheck verify_echo(const GridFunction& f, const EchoSpec& spec, double tol) {
  return verify_echo_impl(f, spec, tol);
}

EchoCheck verify_echo(const ComplexGridFunction& f, const EchoSpec& spec,
                      double tol) {
  return verify_echo_impl(f, spec, tol);
}

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "periodic_trig") return GeneratorKind::PeriodicTrig;
  if (name == "gaussian_line") return GeneratorKind::GaussianLine;
  if (name == "shear_echo") return GeneratorKind::ShearEcho;
  throw InvalidArgument("unknown generator kind '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::PeriodicTrig:
      return "periodic_trig";
    case GeneratorKind::GaussianLine:
      return "gaussian_line";
    case GeneratorKind::ShearEcho:
      return "shear_echo";
  }
  return "unknown";
}

GeneratedFunction generate(GeneratorKind kind, const GeneratorParams& params) {
  const int d = params.basis.dim();
  const auto& axes = params.axes;
  if (axes.size() != static_cast<std::size_t>(d)) {
    throw InvalidArgument("generate: need one axis per dimension");
  }
  for (const auto& ax : axes) ax.validate();
  std::vector<bool> periodic(d);
  for (int k = 0; k < d; ++k) periodic[k] = axes[k].is_periodic();

  auto alpha = params.alpha;
  auto center = params.center;
  alpha.resize(d, 1.0);
  center.resize(d, 0.0);
  auto shear = params.shear;
  if (shear.empty()) shear.assign(d, std::vector<double>(d, 0.0));
  if (shear.size() != static_cast<std::size_t>(d)) {
    throw InvalidArgument("generate: shear must be d x d");
  }
  for (auto& row : shear) {
    if (row.empty()) row.assign(d, 0.0);
    if (row.size() != static_cast<std::size_t>(d)) {
      throw InvalidArgument("generate: shear must be d x d");
    }
  }

  bool has_shear = false;
  for (const auto& row : shear)
    for (double c : row) has_shear = has_shear || c != 0.0;

  switch (kind) {
    case GeneratorKind::PeriodicTrig:
      for (const auto& ax : axes) {
        if (!ax.is_periodic()) {
          throw InvalidArgument("periodic_trig: every axis must be Periodic");
        }
      }
      break;
    case GeneratorKind::GaussianLine:
      if (has_shear) throw InvalidArgument("gaussian_line: shear must be zero");
      break;
    case GeneratorKind::ShearEcho:
      break;
  }

  for (int l = 0; l < d; ++l) {
    if (periodic[l]) continue;
    if (!(alpha[l] > 0.0) || !std::isfinite(alpha[l]) ||
        !std::isfinite(center[l])) {
      throw InvalidArgument("generate: Gaussian width must be positive");
    }
  }

  double amp_sum = 0.0;
  for (const auto& term : params.trig) {
    if (term.freq.size() != static_cast<std::size_t>(d)) {
      throw InvalidArgument("generate: trig frequency has wrong length");
    }
    amp_sum += std::abs(term.amplitude);
  }
  if (params.offset < amp_sum + params.floor || params.floor <= 0.0) {
    throw InvalidArgument(
        "generate: offset must exceed the sum of amplitudes by a positive floor");
  }

  // Integer cell offsets per period on each Line axis.
  std::vector<std::vector<std::int64_t>> shear_cells(
      d, std::vector<std::int64_t>(d, 0));
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      double c = shear[k][l];
      if (c == 0.0) continue;
      if (!periodic[k] || periodic[l] || l >= k) {
        throw InvalidArgument(
            "generate: shear c_{k,l} needs e_k in E0 and e_l a Line axis with l < k");
      }
      auto cells = axes[l].cells_for(c);
      if (!cells) {
        throw InvalidArgument(
            "generate: shear must be a whole number of Line cells");
      }
      shear_cells[k][l] = *cells;
    }
  }

  std::vector<int> extents;
  for (const auto& ax : axes) extents.push_back(ax.size());
  Shape shape(extents);
  std::vector<double> values(shape.size());
  std::vector<double> y(d);
  std::vector<int> q(d);
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    auto idx = shape.unravel(flat);
    for (int k = 0; k < d; ++k) {
      if (periodic[k]) {
        q[k] = idx[k] / axes[k].cells;
        int j = idx[k] % axes[k].cells;
        y[k] = (j + 0.5) / axes[k].cells;
      }
    }
    double value = 1.0;
    for (int l = 0; l < d; ++l) {
      if (periodic[l]) continue;
      std::int64_t m = idx[l];
      double fractional = 0.0;
      for (int k = 0; k < d; ++k) {
        if (!periodic[k] || shear[k][l] == 0.0) continue;
        m += q[k] * shear_cells[k][l];
        fractional += shear[k][l] * y[k];
      }
      const auto& ax = axes[l];
      double u = ax.lo + (static_cast<double>(m) + 0.5) * ax.width() +
                 fractional - center[l];
      value *= std::exp(-std::numbers::pi * alpha[l] * u * u);
    }
    double trig = params.offset;
    for (const auto& term : params.trig) {
      double phase = term.phase;
      for (int k = 0; k < d; ++k)
        if (periodic[k]) phase += 2.0 * std::numbers::pi * term.freq[k] * y[k];
      trig += term.amplitude * std::cos(phase);
    }
    values[flat] = value * trig;
  }

  std::vector<std::vector<double>> echo(d, std::vector<double>(d, 0.0));
  double radius = 0.0;
  for (int l = 0; l < d; ++l) {
    if (periodic[l]) continue;
    double spread = 0.0;
    for (int k = 0; k < d; ++k) {
      if (!periodic[k]) continue;
      echo[k][l] = shear[k][l];
      spread += std::abs(shear[k][l]);
    }
    double tail = std::sqrt(std::log(1e6) / (std::numbers::pi * alpha[l]));
    radius = std::max(radius, tail + std::abs(center[l]) + spread);
  }

  EchoSpec spec(params.basis, periodic, std::move(echo));
  return GeneratedFunction{GridFunction(params.basis, axes, std::move(values)),
                           std::move(spec), radius};
}

}  // namespace mixedconv
