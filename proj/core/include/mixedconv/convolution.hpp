#pragma once

#include <vector>

#include "mixedconv/echo.hpp"
#include "mixedconv/gridfn.hpp"
#include "mixedconv/norms.hpp"

namespace mixedconv {

/// (a * b)(n) = sum_m a(m) b(n - m).
LatticeSequence discrete_convolve(const LatticeSequence& a,
                                  const LatticeSequence& b);

/// The output region I of a semi-discrete convolution: one period on
/// Periodic axes, and on Line axes the part of the stored window whose
/// every shifted source x - phi(j), j in support(a), is still stored.
/// CoverageError when that part is empty, AlignmentError when a shift is
/// not a whole number of cells.
std::vector<AxisSpec> convolution_region(const LatticeSequence& a,
                                         const GridFunction& f,
                                         const EchoSpec& echo);

/// (a *_[E] f)(x) = sum_j a(j) f(x - j) at every midpoint x of I.
///
/// f(x - j) is read from the stored samples through the echo structure:
/// on E0 axes the shift is absorbed (wraparound for v_k = 0, translated
/// Line evaluation for shear echoes), on Line axes it is an exact cell
/// displacement. This reproduces the values of f(x - j) when f >= 0 and
/// their magnitudes in general. Per-cell sums run over support(a) in
/// lexicographic order with compensated summation.
GridFunction semi_discrete_convolve(const LatticeSequence& a,
                                    const GridFunction& f,
                                    const EchoSpec& echo);

/// Same, materialized on an explicit region (aligned Line windows inside
/// convolution_region, single-period Periodic axes).
GridFunction semi_discrete_convolve(const LatticeSequence& a,
                                    const GridFunction& f,
                                    const EchoSpec& echo,
                                    const std::vector<AxisSpec>& region);

}  // namespace mixedconv
