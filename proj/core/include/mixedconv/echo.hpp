#pragma once

// Echo-periodicity: |f(. + e_k)| = |f(. + v_k)| for every e_k in E0, with
// v_k a combination of the earlier non-periodic basis vectors. Periodic
// functions are the special case v_k = 0.

#include <string>
#include <vector>

#include "mixedconv/geometry.hpp"
#include "mixedconv/gridfn.hpp"

namespace mixedconv {

class EchoSpec {
 public:
  /// `periodic[k]` is true when e_k belongs to E0. `echo_vectors[k]` holds
  /// the coordinates of v_k (length d; all zeros allowed; ignored entries of
  /// non-E0 axes must be zero). Throws InvalidArgument unless
  /// support(v_k) is inside M_k = { l <= k : e_l not in E0 }.
  EchoSpec(OrderedBasis basis, std::vector<bool> periodic,
           std::vector<std::vector<double>> echo_vectors);

  /// E0-periodic spec (every v_k = 0).
  static EchoSpec periodic(OrderedBasis basis, std::vector<bool> periodic);

  const OrderedBasis& basis() const { return basis_; }
  int dim() const { return basis_.dim(); }
  const std::vector<bool>& periodic_axes() const { return periodic_; }
  bool in_E0(int k) const { return periodic_[k]; }
  const std::vector<double>& echo_vector(int k) const { return vectors_[k]; }
  /// M_k (0-based axis indices).
  std::vector<int> M(int k) const;
  /// True when every v_k vanishes.
  bool is_periodic_class() const;

  /// Coordinate displacement realizing f(x - j) on the stored data:
  /// periodic components are folded into the echo vectors, so the result
  /// is zero on E0 axes and equals j_l + sum_{k in E0} j_k v_{k,l} on the
  /// others.
  std::vector<double> line_shift(const LatticeIndex& j) const;

  /// Axis specs with E0 axes Periodic and the rest Line.
  void check_axes(const std::vector<AxisSpec>& axes) const;

 private:
  OrderedBasis basis_;
  std::vector<bool> periodic_;
  std::vector<std::vector<double>> vectors_;
};

struct EchoCheck {
  bool pass = true;
  double worst_residual = 0.0;
  /// E0 axis and cell where the worst residual occurred (-1 if none).
  int worst_axis = -1;
  std::vector<int> worst_cell;
  /// Number of (axis, cell) comparisons made.
  std::size_t compared = 0;
};

/// For each e_k in E0 compares |f(x + e_k)| and |f(x + v_k)| on every stored
/// cell x where both shifted points are stored. A Periodic axis holding a
/// single period wraps (the stored data declares periodicity); with more
/// periods stored, shifts are read literally. Passes when every residual is
/// <= tol (1 + max|f|). CoverageError when an E0 axis admits no comparison.
EchoCheck verify_echo(const GridFunction& f, const EchoSpec& spec, double tol);
EchoCheck verify_echo(const ComplexGridFunction& f, const EchoSpec& spec,
                      double tol);

enum class GeneratorKind { PeriodicTrig, GaussianLine, ShearEcho };

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

/// One term amp * cos(2 pi <freq, x_periodic> + phase) of a trigonometric
/// factor; `freq` has one entry per axis (entries on Line axes are ignored).
struct TrigTerm {
  std::vector<int> freq;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Parameters of the built-in nonnegative generators:
///
///   f(x) = prod_{l Line} exp(-pi alpha_l (x_l + sum_{k in E0} c_{k,l} x_k
///                                         - mu_l)^2)
///          * (offset + sum_terms amp cos(2 pi <freq, x> + phase))
///
/// with `offset` >= sum |amp| + floor so the trigonometric factor stays
/// positive. The shear coefficients c_{k,l} make f echo-periodic with
/// v_k = sum_l c_{k,l} e_l. They must be whole multiples of the Line cell
/// width.
struct GeneratorParams {
  OrderedBasis basis = OrderedBasis::standard(1);
  std::vector<AxisSpec> axes;
  std::vector<double> alpha;   // per axis, used on Line axes
  std::vector<double> center;  // per axis, used on Line axes
  /// shear[k][l]: coefficient of e_l in v_k (k in E0, l Line, l < k).
  std::vector<std::vector<double>> shear;
  std::vector<TrigTerm> trig;
  double offset = 1.0;
  /// Lower bound kept between offset and sum |amp|.
  double floor = 0.5;
};

struct GeneratedFunction {
  GridFunction f;
  EchoSpec spec;
  /// Largest |x_l - center| (over Line axes) where the Gaussian factor
  /// exceeds 1e-6 of its peak; the window should contain it.
  double decay_radius = 0.0;
};

/// periodic_trig: every axis Periodic, no Gaussian factor, v_k = 0.
/// gaussian_line: Gaussian factors on Line axes, zero shear.
/// shear_echo: as gaussian_line with nonzero shear allowed.
/// Throws InvalidArgument for inconsistent parameters.
GeneratedFunction generate(GeneratorKind kind, const GeneratorParams& params);

}  // namespace mixedconv
