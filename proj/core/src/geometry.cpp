#include "mixedconv/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mixedconv/error.hpp"

namespace mixedconv {

OrderedBasis::OrderedBasis(Matrix columns, double floor)
    : matrix_(std::move(columns)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw DimensionError("basis matrix must be square and nonempty");
  }
  if (!matrix_.allFinite()) {
    throw NondegeneracyError("basis matrix has non-finite entries");
  }
  lu_.compute(matrix_);
  det_ = lu_.determinant();
  if (!(std::abs(det_) > floor)) {
    std::ostringstream msg;
    msg << "degenerate basis: |det T_E| = " << std::abs(det_)
        << " <= floor " << floor;
    throw NondegeneracyError(msg.str());
  }
}

OrderedBasis OrderedBasis::standard(int dim) {
  if (dim <= 0) throw DimensionError("basis dimension must be positive");
  return OrderedBasis(Matrix::Identity(dim, dim));
}

OrderedBasis OrderedBasis::from_row_major(int dim,
                                          std::span<const double> values,
                                          double floor) {
  if (dim <= 0 || values.size() != static_cast<std::size_t>(dim * dim)) {
    throw DimensionError("basis needs exactly d*d entries");
  }
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = values[i * dim + j];
  return OrderedBasis(std::move(m), floor);
}

bool OrderedBasis::is_standard() const {
  return matrix_ == Matrix::Identity(dim(), dim());
}

Vector OrderedBasis::to_physical(std::span<const double> coords) const {
  if (coords.size() != static_cast<std::size_t>(dim())) {
    throw DimensionError("coordinate vector has wrong length");
  }
  Eigen::Map<const Vector> c(coords.data(), dim());
  return matrix_ * c;
}

Vector OrderedBasis::to_coordinates(const Vector& x) const {
  if (x.size() != dim()) {
    throw DimensionError("point has wrong dimension");
  }
  return lu_.solve(x);
}

OrderedBasis dual_basis(const OrderedBasis& basis) {
  Matrix inv = basis.matrix().inverse();
  return OrderedBasis(2.0 * std::numbers::pi * inv.transpose(), 0.0);
}

Vector Lattice::position(const LatticeIndex& n) const {
  if (n.size() != static_cast<std::size_t>(dim())) {
    throw DimensionError("lattice index has wrong length");
  }
  Vector c(dim());
  for (int k = 0; k < dim(); ++k) c[k] = static_cast<double>(n[k]);
  return basis_.matrix() * c;
}

std::vector<LatticeIndex> lattice_points_in_range(
    const Lattice& lattice, std::span<const std::int64_t> radius) {
  const int d = lattice.dim();
  if (radius.size() != static_cast<std::size_t>(d)) {
    throw DimensionError("radius has wrong length");
  }
  std::vector<LatticeIndex> out;
  for (auto r : radius) {
    if (r < 0) return out;
  }
  LatticeIndex n(d);
  for (int k = 0; k < d; ++k) n[k] = -radius[k];
  while (true) {
    out.push_back(n);
    int k = d - 1;
    while (k >= 0 && n[k] == radius[k]) {
      n[k] = -radius[k];
      --k;
    }
    if (k < 0) break;
    ++n[k];
  }
  return out;
}

double Parallelepiped::volume() const {
  return std::abs(basis_.determinant());
}

bool Parallelepiped::contains(const Vector& x) const {
  Vector t = basis_.to_coordinates(x);
  for (int k = 0; k < t.size(); ++k) {
    if (!(t[k] >= 0.0 && t[k] < 1.0)) return false;
  }
  return true;
}

}  // namespace mixedconv
