#include "mixedconv/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mixedconv/error.hpp"

namespace mixedconv {
namespace {

using cdouble = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_line_grid(const ComplexGridFunction& f, const char* who) {
  for (const auto& ax : f.axes()) {
    if (ax.is_periodic()) {
      throw InvalidArgument(std::string(who) + ": expects Line axes only");
    }
  }
}

}  // namespace

std::complex<double> stft_at(const ComplexGridFunction& f,
                             const ComplexGridFunction& window,
                             std::span<const std::int64_t> x_cells,
                             std::span<const double> xi,
                             FrequencyConvention convention) {
  const int d = f.dim();
  if (window.axes() != f.axes()) {
    throw InvalidArgument("stft: f and window must share the same grid");
  }
  if (x_cells.size() != static_cast<std::size_t>(d) ||
      xi.size() != static_cast<std::size_t>(d)) {
    throw DimensionError("stft: point has wrong dimension");
  }
  require_line_grid(f, "stft");
  double cell_volume = 1.0;
  for (int k = 0; k < d; ++k) {
    const auto& ax = f.axis(k);
    double x = static_cast<double>(x_cells[k]) * ax.width();
    if (x < ax.lo - 1e-12 || x > ax.hi + 1e-12) {
      std::ostringstream msg;
      msg << "stft: window shifted to x = " << x << " on axis " << k + 1
          << " leaves the grid [" << ax.lo << ", " << ax.hi << "]";
      throw CoverageError(msg.str());
    }
    cell_volume *= ax.width();
  }
  const double scale =
      convention == FrequencyConvention::Ordinary ? kTwoPi : 1.0;

  // Odometer over the cells t whose shifted window index t - x is stored.
  const auto& shape = f.shape();
  std::vector<int> lo(d), hi(d), t(d);
  std::vector<std::vector<double>> phase_of(d);
  for (int k = 0; k < d; ++k) {
    const int n = shape.extents[k];
    lo[k] = static_cast<int>(std::max<std::int64_t>(0, x_cells[k]));
    hi[k] = static_cast<int>(std::min<std::int64_t>(n, n + x_cells[k]));
    if (lo[k] >= hi[k]) return 0.0;
    phase_of[k].resize(n);
    for (int i = 0; i < n; ++i)
      phase_of[k][i] = -scale * f.axis(k).midpoint(i) * xi[k];
    t[k] = lo[k];
  }
  std::ptrdiff_t window_offset = 0;
  for (int k = 0; k < d; ++k)
    window_offset += static_cast<std::ptrdiff_t>(x_cells[k]) *
                     static_cast<std::ptrdiff_t>(shape.strides[k]);
  const auto fs = f.samples();
  const auto ws = window.samples();
  cdouble sum = 0.0;
  for (;;) {
    std::size_t flat = shape.flat(t);
    double phase = 0.0;
    for (int k = 0; k < d; ++k) phase += phase_of[k][t[k]];
    sum += fs[flat] *
           std::conj(ws[static_cast<std::size_t>(
               static_cast<std::ptrdiff_t>(flat) - window_offset)]) *
           std::polar(1.0, phase);
    int k = d - 1;
    while (k >= 0 && ++t[k] == hi[k]) {
      t[k] = lo[k];
      --k;
    }
    if (k < 0) break;
  }
  return cell_volume * sum;
}

PhaseSpaceFunction stft(const ComplexGridFunction& f,
                        const ComplexGridFunction& window,
                        const std::vector<AxisSpec>& x_axes,
                        const std::vector<AxisSpec>& xi_axes,
                        FrequencyConvention convention) {
  const int d = f.dim();
  if (x_axes.size() != static_cast<std::size_t>(d) ||
      xi_axes.size() != static_cast<std::size_t>(d)) {
    throw DimensionError("stft: need d x-axes and d xi-axes");
  }
  std::vector<std::vector<std::int64_t>> x_positions(d);
  for (int k = 0; k < d; ++k) {
    const auto& ax = x_axes[k];
    if (ax.is_periodic() || xi_axes[k].is_periodic()) {
      throw InvalidArgument("stft: phase-space axes must be Line axes");
    }
    for (int i = 0; i < ax.cells; ++i) {
      auto c = f.axis(k).cells_for(ax.midpoint(i));
      if (!c) {
        throw AlignmentError("stft: x grid is not aligned with the sample grid");
      }
      x_positions[k].push_back(*c);
    }
  }
  std::vector<AxisSpec> axes = x_axes;
  axes.insert(axes.end(), xi_axes.begin(), xi_axes.end());
  Shape shape([&] {
    std::vector<int> e;
    for (const auto& ax : axes) e.push_back(ax.size());
    return e;
  }());
  std::vector<cdouble> values(shape.size());
  std::vector<std::int64_t> xc(d);
  std::vector<double> xi(d);
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    auto idx = shape.unravel(flat);
    for (int k = 0; k < d; ++k) {
      xc[k] = x_positions[k][idx[k]];
      xi[k] = xi_axes[k].midpoint(idx[d + k]);
    }
    values[flat] = stft_at(f, window, xc, xi, convention);
  }
  return PhaseSpaceFunction(OrderedBasis::standard(2 * d), std::move(axes),
                            std::move(values));
}

ComplexGridFunction to_complex(const GridFunction& f) {
  std::vector<cdouble> values(f.samples().begin(), f.samples().end());
  return ComplexGridFunction(f.basis(), f.axes(), std::move(values));
}

namespace {

struct QuasiPlan {
  std::int64_t rho_cells = 0;
};

QuasiPlan plan_quasiperiodic(const ComplexGridFunction& f, double rho,
                             int n_terms) {
  if (f.dim() != 1 || f.axis(0).is_periodic()) {
    throw InvalidArgument("make_quasiperiodic: f must live on one Line axis");
  }
  if (!(rho > 0.0)) throw InvalidArgument("make_quasiperiodic: rho must be > 0");
  auto c = f.axis(0).cells_for(rho);
  if (!c || *c <= 0) {
    throw AlignmentError("make_quasiperiodic: rho is not a whole number of cells");
  }
  const int n = f.axis(0).cells;
  double peak = f.max_abs();
  double edge = std::max(std::abs(f[0]), std::abs(f[n - 1]));
  if (edge > 1e-8 * peak) {
    throw InvalidArgument(
        "make_quasiperiodic: insufficient decay at the window edges");
  }
  if (static_cast<std::int64_t>(n_terms) * *c < n) {
    throw InvalidArgument(
        "make_quasiperiodic: insufficient decay, n_terms * rho does not cover "
        "the window");
  }
  return QuasiPlan{*c};
}

cdouble quasi_sum(const ComplexGridFunction& f, const QuasiPlan& plan,
                  double rho, int n_terms, int i, double xi) {
  const std::int64_t n = f.axis(0).cells;
  cdouble sum = 0.0;
  for (int m = -n_terms; m <= n_terms; ++m) {
    std::int64_t src = i - m * plan.rho_cells;
    if (src < 0 || src >= n) continue;
    sum += f[static_cast<std::size_t>(src)] *
           std::polar(1.0, kTwoPi * rho * m * xi);
  }
  return sum;
}

}  // namespace

PhaseSpaceFunction make_quasiperiodic(const ComplexGridFunction& f, double rho,
                                      int n_terms, const AxisSpec& xi_axis) {
  auto plan = plan_quasiperiodic(f, rho, n_terms);
  if (xi_axis.is_periodic()) {
    throw InvalidArgument("make_quasiperiodic: xi axis must be a Line axis");
  }
  std::vector<AxisSpec> axes{f.axis(0), xi_axis};
  const int nx = f.axis(0).cells;
  const int nxi = xi_axis.cells;
  std::vector<cdouble> values(static_cast<std::size_t>(nx) * nxi);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nxi; ++j)
      values[static_cast<std::size_t>(i) * nxi + j] =
          quasi_sum(f, plan, rho, n_terms, i, xi_axis.midpoint(j));
  return PhaseSpaceFunction(OrderedBasis::standard(2), std::move(axes),
                            std::move(values));
}

std::complex<double> quasiperiodic_at(const ComplexGridFunction& f, double rho,
                                      int n_terms, int x_index, double xi) {
  auto plan = plan_quasiperiodic(f, rho, n_terms);
  return quasi_sum(f, plan, rho, n_terms, x_index, xi);
}

std::complex<double> second_level_stft_at(const PhaseSpaceFunction& F,
                                          const PhaseSpaceFunction& Phi,
                                          std::int64_t x_cells,
                                          std::int64_t xi_cells, double eta,
                                          double y) {
  if (F.dim() != 2) {
    throw DimensionError("second-level transform expects a 2-axis function");
  }
  std::int64_t shift[2] = {x_cells, xi_cells};
  double freq[2] = {eta, y};
  return stft_at(F, Phi, shift, freq, FrequencyConvention::Angular);
}

TransferReport verify_transfer(const PhaseSpaceFunction& F,
                               const PhaseSpaceFunction& Phi,
                               const TransferOptions& options) {
  if (F.dim() != 2 || Phi.axes() != F.axes()) {
    throw InvalidArgument("verify_transfer: F and Phi must share a 2-axis grid");
  }
  auto rho_cells = F.axis(0).cells_for(options.rho);
  auto period_cells = F.axis(1).cells_for(1.0 / options.rho);
  if (!rho_cells || !period_cells) {
    throw AlignmentError(
        "verify_transfer: rho and 1/rho must be whole numbers of cells");
  }
  const double rho = options.rho;

  auto V = [&](std::int64_t x, std::int64_t xi, double eta, double y) {
    return std::abs(second_level_stft_at(F, Phi, x, xi, eta, y));
  };

  TransferReport report;
  report.shift_residual_map.assign(
      options.x_cells.size() * options.xi_cells.size(), 0.0);
  std::size_t cell = 0;
  for (auto x : options.x_cells) {
    for (auto xi : options.xi_cells) {
      double& local = report.shift_residual_map[cell++];
      for (double eta : options.eta) {
        for (double y : options.y) {
          double base = V(x, xi, eta, y);
          report.max_magnitude = std::max(report.max_magnitude, base);
          for (int k : options.k_values) {
            double lhs = V(x + k * *rho_cells, xi, eta, y);
            double rhs = V(x, xi, eta, y - kTwoPi * rho * k);
            report.max_magnitude = std::max({report.max_magnitude, lhs, rhs});
            double r = std::abs(lhs - rhs);
            report.shift_residual = std::max(report.shift_residual, r);
            local = std::max(local, r);
          }
          for (int kappa : options.kappa_values) {
            double lhs = V(x, xi + kappa * *period_cells, eta, y);
            report.max_magnitude = std::max(report.max_magnitude, lhs);
            report.xi_residual =
                std::max(report.xi_residual, std::abs(lhs - base));
          }
        }
      }
    }
  }
  const double scale = report.max_magnitude > 0.0 ? report.max_magnitude : 1.0;
  report.relative_shift_residual = report.shift_residual / scale;
  report.relative_xi_residual = report.xi_residual / scale;
  for (auto& r : report.shift_residual_map) r /= scale;

  if (report.relative_shift_residual > options.tol) {
    double alt = 0.0;
    for (auto x : options.x_cells)
      for (auto xi : options.xi_cells)
        for (double eta : options.eta)
          for (double y : options.y)
            for (int k : options.k_values)
              alt = std::max(alt, std::abs(V(x + k * *rho_cells, xi, eta, y) -
                                           V(x, xi, eta - kTwoPi * rho * k, y)));
    report.alternative_pairing_residual = alt / scale;
    report.flag_alternative_pairing =
        report.alternative_pairing_residual <= options.tol;
  }
  report.pass = report.relative_shift_residual < options.tol &&
                report.relative_xi_residual < options.tol;
  return report;
}

GaussianTransferCase gaussian_transfer_case(int points, double rho,
                                            double tol) {
  if (points < 12 || points % 4 != 0) {
    throw InvalidArgument("transfer case: points must be a multiple of 4, >= 12");
  }
  const double half = points / 4.0;
  auto axis = AxisSpec::line(points, -half, half);
  auto basis1 = OrderedBasis::standard(1);
  auto f = sample_complex(basis1, {axis}, [](std::span<const double> t) {
    return cdouble(std::exp(-std::numbers::pi * t[0] * t[0]), 0.0);
  });
  auto rho_cells = axis.cells_for(rho);
  if (!rho_cells || *rho_cells <= 0) {
    throw AlignmentError("transfer case: rho must be a whole number of cells");
  }
  const int n_terms = static_cast<int>((points + *rho_cells - 1) / *rho_cells);
  auto F = make_quasiperiodic(f, rho, n_terms, axis);
  auto Phi = sample_complex(OrderedBasis::standard(2), {axis, axis},
                            [](std::span<const double> ts) {
                              return cdouble(std::exp(-std::numbers::pi *
                                                      (ts[0] * ts[0] + ts[1] * ts[1])),
                                             0.0);
                            });
  TransferOptions options;
  options.rho = rho;
  options.tol = tol;
  const auto reach = static_cast<std::int64_t>(std::llround(1.0 / axis.width()));
  for (std::int64_t c = -reach; c <= reach; ++c) {
    options.x_cells.push_back(c);
    options.xi_cells.push_back(c);
  }
  auto dual = AxisSpec::line(points, -std::numbers::pi, std::numbers::pi);
  for (int i = 0; i < points; ++i) {
    options.eta.push_back(dual.midpoint(i));
    options.y.push_back(dual.midpoint(i));
  }
  return GaussianTransferCase{std::move(F), std::move(Phi), std::move(options)};
}

WindowChangeGrid WindowChangeGrid::refined() const {
  WindowChangeGrid g = *this;
  g.cells *= 2;
  g.xi_step /= 2.0;
  g.radius *= 2;
  return g;
}

WindowChangeLevel window_change_level(const ComplexFunction1D& f,
                                      const ComplexFunction1D& phi,
                                      const ComplexFunction1D& phi0,
                                      const WindowChangeGrid& grid) {
  if (grid.cells <= 0 || grid.radius <= 0 || grid.x_step_cells <= 0 ||
      !(grid.xi_step > 0.0) || !(grid.half_width > 0.0)) {
    throw InvalidArgument("window change: malformed grid");
  }
  auto axis = AxisSpec::line(grid.cells, -grid.half_width, grid.half_width);
  auto basis = OrderedBasis::standard(1);
  auto wrap = [](const ComplexFunction1D& g) {
    return [&g](std::span<const double> t) { return g(t[0]); };
  };
  auto fs = sample_complex(basis, {axis}, wrap(f));
  auto phis = sample_complex(basis, {axis}, wrap(phi));
  auto phi0s = sample_complex(basis, {axis}, wrap(phi0));
  if (!axis.cells_for(0.0)) {
    throw AlignmentError("window change: origin is not a grid shift");
  }

  double phi0_norm2 = 0.0;
  for (const auto& v : phi0s.samples()) phi0_norm2 += std::norm(v);
  phi0_norm2 *= axis.width();
  if (!(phi0_norm2 > 0.0)) throw NumericError("window change: phi0 vanishes");

  const int M = grid.radius;
  const int side = 2 * M + 1;
  const int big = 4 * M + 1;
  const double dx = grid.x_step_cells * axis.width();
  const double dxi = grid.xi_step;

  auto magnitude = [&](const ComplexGridFunction& g,
                       const ComplexGridFunction& w, int i, int j) {
    std::int64_t xc = static_cast<std::int64_t>(i) * grid.x_step_cells;
    double xi = j * dxi;
    return std::abs(stft_at(g, w, std::span<const std::int64_t>(&xc, 1),
                            std::span<const double>(&xi, 1)));
  };

  std::vector<double> A(static_cast<std::size_t>(big) * big);
  for (int i = -2 * M; i <= 2 * M; ++i)
    for (int j = -2 * M; j <= 2 * M; ++j)
      A[static_cast<std::size_t>(i + 2 * M) * big + (j + 2 * M)] =
          magnitude(phi0s, phis, i, j);
  std::vector<double> B(static_cast<std::size_t>(side) * side);
  std::vector<double> L(B.size());
  for (int i = -M; i <= M; ++i) {
    for (int j = -M; j <= M; ++j) {
      std::size_t at = static_cast<std::size_t>(i + M) * side + (j + M);
      B[at] = magnitude(fs, phi0s, i, j);
      L[at] = magnitude(fs, phis, i, j);
    }
  }

  std::vector<double> R(B.size(), 0.0);
  for (int zi = -M; zi <= M; ++zi) {
    for (int zj = -M; zj <= M; ++zj) {
      double sum = 0.0;
      for (int wi = -M; wi <= M; ++wi) {
        const double* arow =
            &A[static_cast<std::size_t>(zi - wi + 2 * M) * big];
        const double* brow = &B[static_cast<std::size_t>(wi + M) * side];
        for (int wj = -M; wj <= M; ++wj)
          sum += arow[zj - wj + 2 * M] * brow[wj + M];
      }
      R[static_cast<std::size_t>(zi + M) * side + (zj + M)] =
          sum * dx * dxi / phi0_norm2;
    }
  }

  WindowChangeLevel level;
  level.lhs_max = *std::max_element(L.begin(), L.end());
  level.rhs_max = *std::max_element(R.begin(), R.end());
  for (std::size_t at = 0; at < L.size(); ++at) {
    if (L[at] < 1e-12 * level.lhs_max && R[at] < 1e-12 * level.rhs_max) continue;
    level.c_hat = std::max(level.c_hat, L[at] / std::max(R[at], 1e-300));
    ++level.cells_compared;
  }
  return level;
}

WindowChangeReport verify_window_change(const ComplexFunction1D& f,
                                        const ComplexFunction1D& phi,
                                        const ComplexFunction1D& phi0,
                                        const WindowChangeGrid& grid,
                                        double max_change) {
  WindowChangeReport report;
  report.coarse = window_change_level(f, phi, phi0, grid);
  report.fine = window_change_level(f, phi, phi0, grid.refined());
  double a = report.coarse.c_hat;
  double b = report.fine.c_hat;
  bool finite = std::isfinite(a) && std::isfinite(b);
  if (a > 0.0 && b > 0.0) {
    report.change = std::max(a, b) / std::min(a, b);
  } else {
    report.change = (a == b) ? 1.0 : std::numeric_limits<double>::infinity();
  }
  report.stable = finite && report.change < max_change;
  report.pass = report.stable;
  return report;
}

}  // namespace mixedconv
