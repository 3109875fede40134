#pragma once

// Ordered bases, lattices and fundamental parallelepipeds.
//
// Everything downstream (norms, convolutions, echo checks) is computed in
// basis coordinates: a point c = (c_1, ..., c_d) stands for the physical
// position c_1 e_1 + ... + c_d e_d. No Jacobian factor |det T_E| is applied
// to integrals; the basis only enters through the weights, which are
// evaluated at physical positions.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mixedconv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Integer lattice coordinates n = (n_1, ..., n_d).
using LatticeIndex = std::vector<std::int64_t>;

inline constexpr double kDefaultNondegeneracyFloor = 1e-12;

/// An invertible ordered basis e_1, ..., e_d of R^d, stored as the matrix
/// T_E whose k-th column is e_k.
class OrderedBasis {
 public:
  /// Throws NondegeneracyError when |det| <= floor.
  explicit OrderedBasis(Matrix columns,
                        double floor = kDefaultNondegeneracyFloor);

  static OrderedBasis standard(int dim);
  /// Builds T_E from a row-major list of dim*dim reals.
  static OrderedBasis from_row_major(int dim, std::span<const double> values,
                                     double floor = kDefaultNondegeneracyFloor);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  Vector vector(int k) const { return matrix_.col(k); }
  double determinant() const { return det_; }
  bool is_standard() const;

  /// T_E * coords.
  Vector to_physical(std::span<const double> coords) const;
  Vector to_physical(const Vector& coords) const { return matrix_ * coords; }

  /// Solves T_E c = x.
  Vector to_coordinates(const Vector& x) const;

 private:
  Matrix matrix_;
  Eigen::PartialPivLU<Matrix> lu_;
  double det_ = 0.0;
};

inline Vector to_coordinates(const OrderedBasis& basis, const Vector& x) {
  return basis.to_coordinates(x);
}

/// The basis with matrix 2*pi*(T_E^{-1})^t.
OrderedBasis dual_basis(const OrderedBasis& basis);

/// Lambda_E. Points are integer coordinate tuples; the physical position
/// of n is T_E n.
class Lattice {
 public:
  explicit Lattice(OrderedBasis basis) : basis_(std::move(basis)) {}

  const OrderedBasis& basis() const { return basis_; }
  int dim() const { return basis_.dim(); }
  Vector position(const LatticeIndex& n) const;

 private:
  OrderedBasis basis_;
};

/// All n with |n_k| <= radius[k], lexicographic (first coordinate slowest).
std::vector<LatticeIndex> lattice_points_in_range(
    const Lattice& lattice, std::span<const std::int64_t> radius);

/// kappa(E) = { t_1 e_1 + ... + t_d e_d : t_k in [0,1) }.
class Parallelepiped {
 public:
  explicit Parallelepiped(OrderedBasis basis) : basis_(std::move(basis)) {}

  const OrderedBasis& basis() const { return basis_; }
  double volume() const;
  bool contains(const Vector& x) const;

 private:
  OrderedBasis basis_;
};

}  // namespace mixedconv
