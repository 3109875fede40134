#pragma once

// Midpoint samples of functions in basis coordinates.
//
// A grid is a product of axes. A Line axis samples [lo, hi] with `cells`
// cells; a Periodic axis samples the unit period [0, 1) with `cells` cells
// per period and may store several consecutive periods (so that echo
// relations between periods can be checked on stored data). Samples are
// stored row-major: the last axis varies fastest.

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mixedconv/geometry.hpp"

namespace mixedconv {

enum class AxisKind { Periodic, Line };

struct AxisSpec {
  AxisKind kind = AxisKind::Line;
  int cells = 1;
  double lo = 0.0;
  double hi = 1.0;
  /// Stored periods (Periodic axes only).
  int periods = 1;

  static AxisSpec periodic(int cells, int periods = 1);
  static AxisSpec line(int cells, double lo, double hi);

  bool is_periodic() const { return kind == AxisKind::Periodic; }
  /// Cell width h.
  double width() const { return (hi - lo) / cells; }
  /// Number of stored samples.
  int size() const { return is_periodic() ? cells * periods : cells; }
  /// Upper end of the stored window.
  double window_hi() const { return is_periodic() ? lo + periods : hi; }
  double midpoint(int i) const { return lo + (i + 0.5) * width(); }
  /// Throws InvalidArgument for zero-cell or empty axes.
  void validate() const;
  /// Number of cells spanned by a coordinate displacement, or nullopt when
  /// the displacement is not a whole number of cells.
  std::optional<std::int64_t> cells_for(double displacement) const;

  bool operator==(const AxisSpec&) const = default;
};

/// Row-major shape helper.
struct Shape {
  std::vector<int> extents;
  std::vector<std::size_t> strides;

  Shape() = default;
  explicit Shape(std::vector<int> extents);
  std::size_t size() const;
  int rank() const { return static_cast<int>(extents.size()); }
  std::size_t flat(std::span<const int> idx) const;
  std::vector<int> unravel(std::size_t flat) const;
};

template <class T>
class BasicGridFunction {
 public:
  using value_type = T;

  /// Throws DimensionError on extent mismatch and SamplingError on
  /// non-finite samples.
  BasicGridFunction(OrderedBasis basis, std::vector<AxisSpec> axes,
                    std::vector<T> samples);

  const OrderedBasis& basis() const { return basis_; }
  const std::vector<AxisSpec>& axes() const { return axes_; }
  const AxisSpec& axis(int k) const { return axes_[k]; }
  int dim() const { return static_cast<int>(axes_.size()); }
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return samples_.size(); }
  std::span<const T> samples() const { return samples_; }

  T at(std::span<const int> idx) const { return samples_[shape_.flat(idx)]; }
  T operator[](std::size_t flat) const { return samples_[flat]; }

  /// Coordinates of the midpoint of a cell.
  std::vector<double> midpoint(std::span<const int> idx) const;
  double max_abs() const;

 private:
  OrderedBasis basis_;
  std::vector<AxisSpec> axes_;
  Shape shape_;
  std::vector<T> samples_;
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<std::complex<double>>;

using RealCoordinateMap = std::function<double(std::span<const double>)>;
using ComplexCoordinateMap =
    std::function<std::complex<double>(std::span<const double>)>;

/// samples[i] = fn(midpoint of cell i). Throws SamplingError naming the cell
/// when fn returns a non-finite value.
GridFunction sample(const OrderedBasis& basis, std::vector<AxisSpec> axes,
                    const RealCoordinateMap& fn);
ComplexGridFunction sample_complex(const OrderedBasis& basis,
                                   std::vector<AxisSpec> axes,
                                   const ComplexCoordinateMap& fn);

/// f(. - steps e_k).
///
/// Periodic axes rotate the stored samples by steps*cells (a whole number
/// of periods). Line axes displace the samples by steps coordinate units;
/// the result lives on the part of the original window where the source is
/// sampled. AlignmentError when steps is not a whole number of cells,
/// CoverageError when nothing of the window survives.
GridFunction shift(const GridFunction& f, int axis, std::int64_t steps);

/// As above but materialized on the Line window [roi_lo, roi_hi], which must
/// be aligned with the grid. CoverageError lists the missing source range.
GridFunction shift(const GridFunction& f, int axis, std::int64_t steps,
                   double roi_lo, double roi_hi);

/// Keeps only the first stored period of every Periodic axis.
template <class T>
BasicGridFunction<T> fundamental_period(const BasicGridFunction<T>& f);

/// Flat text dump: a header (dimension, basis, axes, value type) followed by
/// the row-major samples, one per line.
template <class T>
void write_grid(std::ostream& out, const BasicGridFunction<T>& f);
GridFunction read_grid(std::istream& in);
ComplexGridFunction read_complex_grid(std::istream& in);

}  // namespace mixedconv
