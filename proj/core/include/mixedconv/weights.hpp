#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixedconv/geometry.hpp"

namespace mixedconv {

enum class WeightFamily { Constant, Exponential, Polynomial, User };

/// A positive weight on R^d, evaluated at physical positions.
///
/// Closed-form families use the Euclidean norm |x| of the physical point:
/// exponential(r) is e^{r|x|}, polynomial(s) is (1+|x|)^s.
class Weight {
 public:
  using Map = std::function<double(const Vector&)>;

  /// The constant weight 1.
  Weight();

  static Weight constant();
  static Weight exponential(double r);
  static Weight polynomial(double s);
  /// `fn` must be reentrant. Positivity is checked at every evaluation.
  static Weight user(Map fn, std::string name = "user");

  /// Parses "constant", "exp:<r>" or "poly:<s>".
  static Weight parse(const std::string& text);

  /// Throws PositivityError when the value is not positive and finite.
  double operator()(const Vector& x) const;

  WeightFamily family() const { return family_; }
  double parameter() const { return param_; }
  const std::string& name() const { return name_; }
  bool is_constant() const { return family_ == WeightFamily::Constant; }

 private:
  Weight(WeightFamily family, double param, std::string name, Map fn);

  WeightFamily family_;
  double param_ = 0.0;
  std::string name_;
  std::shared_ptr<const Map> fn_;
};

/// make_weight(family, param): param is r for Exponential, s for Polynomial.
Weight make_weight(WeightFamily family, double param = 0.0);

/// omega_0(x) = base(sum_{k : keep[k]} c_k e_k) where c are the
/// coordinates of x in `basis`. Used to build weights that ignore the
/// periodic directions.
Weight restrict_to_axes(const Weight& base, const OrderedBasis& basis,
                        std::vector<bool> keep);

/// Axis-aligned box [lo_k, hi_k] in whichever space the caller uses.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int dim, double half_width);
  int dim() const { return static_cast<int>(lo.size()); }
};

/// `per_axis` evenly spaced points per axis including both endpoints
/// (lexicographic, first axis slowest).
std::vector<Vector> sample_box(const Box& box, int per_axis = 17);

/// Empirical moderateness certificate: the largest observed
/// omega(x+y) / (omega(x) v(y)) over the sampled pairs.
struct ModerationCertificate {
  double constant = 0.0;
  Vector worst_x;
  Vector worst_y;
  std::size_t pairs = 0;
};

/// Certifies over every (x, y) with x in `points`, y in `shifts`.
ModerationCertificate certify_moderate(const Weight& omega, const Weight& v,
                                       std::span<const Vector> points,
                                       std::span<const Vector> shifts);

/// Certifies over explicit (x, y) pairs.
ModerationCertificate certify_moderate_pairs(
    const Weight& omega, const Weight& v,
    std::span<const std::pair<Vector, Vector>> pairs);

/// Lower estimate of the moderateness constant of omega w.r.t. v on
/// `region` (sampled with `per_axis` points per axis) and `shifts`.
double moderate_constant(const Weight& omega, const Weight& v,
                         const Box& region, std::span<const Vector> shifts,
                         int per_axis = 17);

struct SubmultiplicativeCheck {
  bool ok = true;
  /// "even", "moderate" or empty when ok.
  std::string failure;
  Vector witness_x;
  Vector witness_y;
  double constant = 0.0;
};

SubmultiplicativeCheck check_submultiplicative(const Weight& v,
                                               const Box& region,
                                               std::span<const Vector> shifts,
                                               double tol = 1e-9,
                                               int per_axis = 17);

struct CompatibilityCheck {
  bool ok = true;
  double worst_residual = 0.0;
  /// Coordinates of the worst sampled point.
  Vector witness;
};

/// Checks omega(sum x_k e_k) == omega(sum_{k : !periodic[k]} x_k e_k) on a
/// sampled coordinate box, to relative tolerance `tol`.
CompatibilityCheck check_E0_compatibility(const Weight& omega,
                                          const OrderedBasis& basis,
                                          const std::vector<bool>& periodic,
                                          const Box& coordinate_region,
                                          double tol = 1e-12,
                                          int per_axis = 17);

}  // namespace mixedconv
