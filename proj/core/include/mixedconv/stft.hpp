#pragma once

// Discrete short-time Fourier transforms (Riemann sums on Line grids),
// quasi-periodic phase-space functions, and the checks built on them.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mixedconv/gridfn.hpp"

namespace mixedconv {

/// A function on phase space, sampled as a grid over (x, xi) (2d axes) or
/// over (x, xi, eta, y) for second-level transforms.
using PhaseSpaceFunction = ComplexGridFunction;

/// Ordinary: modulation e^{-2 pi i <t, xi>}. Angular: e^{-i <t, xi>}.
enum class FrequencyConvention { Ordinary, Angular };

/// V_window f(x, xi) = h^d sum_t f(t) conj(window(t - x)) e^{-2 pi i <t,xi>}
/// (or e^{-i <t,xi>}). f and window share the same Line grid; x is given in
/// whole cells. Window samples shifted outside the grid count as zero.
/// CoverageError when x moves the window centre outside the grid.
std::complex<double> stft_at(const ComplexGridFunction& f,
                             const ComplexGridFunction& window,
                             std::span<const std::int64_t> x_cells,
                             std::span<const double> xi,
                             FrequencyConvention convention =
                                 FrequencyConvention::Ordinary);

/// V_window f on the product of `x_axes` (Line axes whose midpoints are
/// whole multiples of the grid cell width, AlignmentError otherwise) and
/// `xi_axes` (any Line axes).
PhaseSpaceFunction stft(const ComplexGridFunction& f,
                        const ComplexGridFunction& window,
                        const std::vector<AxisSpec>& x_axes,
                        const std::vector<AxisSpec>& xi_axes,
                        FrequencyConvention convention =
                            FrequencyConvention::Ordinary);

/// Promotes a real grid to a complex one.
ComplexGridFunction to_complex(const GridFunction& f);

/// F(x, xi) = sum_{|n| <= n_terms} f(x - rho n) e^{2 pi i rho n xi} on the
/// x grid of f (one Line axis) times `xi_axis`. rho must be a whole number
/// of cells. InvalidArgument ("insufficient decay") when |f| at the window
/// edges exceeds 1e-8 max|f|, or when n_terms * rho does not cover the
/// window.
PhaseSpaceFunction make_quasiperiodic(const ComplexGridFunction& f, double rho,
                                      int n_terms, const AxisSpec& xi_axis);

/// Point evaluation of the same Zak-type sum at (x_i, xi).
std::complex<double> quasiperiodic_at(const ComplexGridFunction& f, double rho,
                                      int n_terms, int x_index, double xi);

struct TransferOptions {
  double rho = 1.0;
  std::vector<int> k_values{-1, 0, 1};
  std::vector<int> kappa_values{-1, 0, 1};
  /// x and xi evaluation points, in cells of the (t, s) grid of F.
  std::vector<std::int64_t> x_cells;
  std::vector<std::int64_t> xi_cells;
  /// Dual-variable evaluation points.
  std::vector<double> eta;
  std::vector<double> y;
  double tol = 0.05;
};

struct TransferReport {
  /// max | |V(x + rho k, xi, eta, y)| - |V(x, xi, eta, y - 2 pi rho k)| |
  double shift_residual = 0.0;
  /// max | |V(x, xi + kappa/rho, eta, y)| - |V(x, xi, eta, y)| |
  double xi_residual = 0.0;
  double max_magnitude = 0.0;
  /// Residuals divided by max_magnitude.
  double relative_shift_residual = 0.0;
  double relative_xi_residual = 0.0;
  /// Relative residual of the same shift recorded on the eta slot instead;
  /// only computed when the y-slot residual exceeds tol.
  double alternative_pairing_residual = -1.0;
  bool flag_alternative_pairing = false;
  /// Worst shift residual per (x, xi) evaluation point, row-major.
  std::vector<double> shift_residual_map;
  bool pass = false;
};

/// Checks the transfer identities of the second-level transform V_Phi F
/// (angular convention, (x, xi) paired with (eta, y)) on grid-aligned
/// arguments. F and Phi are sampled on the same 2-axis (t, s) grid.
TransferReport verify_transfer(const PhaseSpaceFunction& F,
                               const PhaseSpaceFunction& Phi,
                               const TransferOptions& options);

/// A ready-made transfer check: F built from f(t) = e^{-pi t^2} with
/// quasi-period rho, Phi(t, s) = e^{-pi (t^2 + s^2)}, both on a (t, s) grid
/// of `points` cells per axis with cell width 1/2 (window
/// [-points/4, points/4]). x and xi run over the aligned values in [-1, 1],
/// eta and y over `points` midpoints of [-pi, pi]. `points` must be a
/// multiple of 4 and at least 12.
struct GaussianTransferCase {
  PhaseSpaceFunction F;
  PhaseSpaceFunction Phi;
  TransferOptions options;
};

GaussianTransferCase gaussian_transfer_case(int points, double rho = 1.0,
                                            double tol = 0.05);

/// Evaluates V_Phi F(x, xi, eta, y) with the angular convention.
std::complex<double> second_level_stft_at(const PhaseSpaceFunction& F,
                                          const PhaseSpaceFunction& Phi,
                                          std::int64_t x_cells,
                                          std::int64_t xi_cells, double eta,
                                          double y);

using ComplexFunction1D = std::function<std::complex<double>(double)>;

struct WindowChangeGrid {
  /// t-grid: Line window [-half_width, half_width] with `cells` cells.
  double half_width = 6.0;
  int cells = 96;
  /// Phase-space grid: x = i * x_step_cells * h, xi = j * xi_step for
  /// |i|, |j| <= radius.
  int x_step_cells = 2;
  double xi_step = 0.25;
  int radius = 12;

  /// Halves every spacing and doubles the counts (same extents).
  WindowChangeGrid refined() const;
};

struct WindowChangeLevel {
  double c_hat = 0.0;
  double lhs_max = 0.0;
  double rhs_max = 0.0;
  std::size_t cells_compared = 0;
};

struct WindowChangeReport {
  WindowChangeLevel coarse;
  WindowChangeLevel fine;
  /// max(c, c') / min(c, c') of the two estimates.
  double change = 0.0;
  bool stable = false;
  bool pass = false;
};

/// Estimates the smallest C with |V_phi f| <= C (|V_phi phi0| * |V_phi0 f|)
/// / ||phi0||_2^2 on the phase-space grid, where * is the continuous
/// convolution computed by a Riemann sum, at `grid` and at grid.refined().
/// Cells where both sides are below 1e-12 of their maxima are skipped; the
/// right side is floored at 1e-300. Passes when both estimates are finite
/// and differ by less than a factor `max_change`.
WindowChangeReport verify_window_change(const ComplexFunction1D& f,
                                        const ComplexFunction1D& phi,
                                        const ComplexFunction1D& phi0,
                                        const WindowChangeGrid& grid,
                                        double max_change = 2.0);

WindowChangeLevel window_change_level(const ComplexFunction1D& f,
                                      const ComplexFunction1D& phi,
                                      const ComplexFunction1D& phi0,
                                      const WindowChangeGrid& grid);

}  // namespace mixedconv
