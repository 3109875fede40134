#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mixedconv/geometry.hpp"
#include "mixedconv/gridfn.hpp"
#include "mixedconv/weights.hpp"

namespace mixedconv {

/// Lebesgue exponents p_1, ..., p_d in (0, inf]; infinity is stored as
/// +inf and printed as "inf".
class ExponentVector {
 public:
  ExponentVector() = default;
  /// Throws InvalidArgument when an entry is not positive.
  explicit ExponentVector(std::vector<double> entries);
  static ExponentVector uniform(int dim, double p);
  /// Parses a comma list such as "2,inf,0.5".
  static ExponentVector parse(const std::string& text);

  int size() const { return static_cast<int>(entries_.size()); }
  double operator[](int k) const { return entries_[k]; }
  bool is_infinite(int k) const;
  std::span<const double> entries() const { return entries_; }
  std::string to_string() const;

  bool operator==(const ExponentVector&) const = default;

 private:
  std::vector<double> entries_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A finitely supported real sequence on Lambda_E, keyed by integer
/// coordinates; iteration order is lexicographic.
class LatticeSequence {
 public:
  explicit LatticeSequence(Lattice lattice) : lattice_(std::move(lattice)) {}

  static LatticeSequence delta(Lattice lattice, LatticeIndex at);

  const Lattice& lattice() const { return lattice_; }
  int dim() const { return lattice_.dim(); }
  /// Sets a(n); zero values are dropped from the support.
  void set(const LatticeIndex& n, double value);
  double operator()(const LatticeIndex& n) const;
  const std::map<LatticeIndex, double>& support() const { return values_; }
  bool empty() const { return values_.empty(); }

 private:
  Lattice lattice_;
  std::map<LatticeIndex, double> values_;
};

/// Dense row-major array of nonnegative values with per-axis cell widths;
/// the working type of the iterated norm.
struct NormArray {
  Shape shape;
  std::vector<double> widths;
  std::vector<double> values;
};

/// Applies the per-axis L^{p_k} quadratures to the leading `count` axes
/// (axis 0 first): finite p gives (h sum g^p)^{1/p}, p = inf gives the max.
/// `exponents` holds one entry per consumed axis.
NormArray reduce_leading_axes(NormArray g, std::span<const double> exponents,
                              int count);

/// The mixed quasi-norm over the stored window of f (first period on
/// Periodic axes), with omega evaluated at the physical midpoints.
double mixed_norm(const GridFunction& f, const ExponentVector& p,
                  const Weight& omega = Weight());
double mixed_norm(const ComplexGridFunction& f, const ExponentVector& p,
                  const Weight& omega = Weight());

/// Mixed norm of the cell-constant extension of a: iterated l^{p_k} sums of
/// |a(j)| omega(T_E (j + 1/2)).
double discrete_mixed_norm(const LatticeSequence& a, const ExponentVector& p,
                           const Weight& omega = Weight());

/// r_k <= min(1, p_1, ..., p_k) for every k. DimensionError on mismatch.
bool validate_exponent_pair(const ExponentVector& p, const ExponentVector& r);

/// (p_{0,1}, ..., p_{0,d}) with p_{0,k} = min(1, p_1, ..., p_k).
ExponentVector running_min_exponent(const ExponentVector& p);

}  // namespace mixedconv
