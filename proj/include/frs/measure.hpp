// Copyright 2026 The frs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FRS_MEASURE_HPP
#define FRS_MEASURE_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "frs/common.hpp"
#include "frs/grid.hpp"
#include "frs/symmat.hpp"

namespace frs {

/// A symmetric-matrix block per grid cell. No constraint is imposed: fields
/// are the raw material for measures (PSD, unit mass) and tangent potentials
/// (zero weighted trace average), and also stand on their own as functional
/// arguments and gradient containers.
class MatrixField {
 public:
  MatrixField(GridPtr grid, std::vector<SymMat> blocks)
      : grid_(std::move(grid)), blocks_(std::move(blocks)) {
    if (!grid_) throw DomainError("MatrixField: null grid");
    if (blocks_.size() != grid_->cells())
      throw DimensionError("MatrixField: block count does not match grid cells");
    for (const SymMat& b : blocks_)
      if (b.dim() != grid_->matrix_dim())
        throw DimensionError("MatrixField: block dimension does not match grid");
  }

  static MatrixField zero(GridPtr grid) {
    std::vector<SymMat> blocks(grid->cells(), SymMat::zero(grid->matrix_dim()));
    return MatrixField(std::move(grid), std::move(blocks));
  }

  static MatrixField constant(GridPtr grid, const SymMat& value) {
    std::vector<SymMat> blocks(grid->cells(), value);
    return MatrixField(std::move(grid), std::move(blocks));
  }

  const GridPtr& grid() const { return grid_; }
  std::size_t cells() const { return blocks_.size(); }
  int matrix_dim() const { return grid_->matrix_dim(); }
  const SymMat& operator[](std::size_t k) const { return blocks_[k]; }
  SymMat& operator[](std::size_t k) { return blocks_[k]; }
  const std::vector<SymMat>& blocks() const { return blocks_; }

  MatrixField& operator+=(const MatrixField& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
    return *this;
  }
  MatrixField& operator-=(const MatrixField& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
    return *this;
  }
  MatrixField& operator*=(double s) {
    for (SymMat& b : blocks_) b = s * b;
    return *this;
  }
  friend MatrixField operator+(MatrixField a, const MatrixField& b) { return a += b; }
  friend MatrixField operator-(MatrixField a, const MatrixField& b) { return a -= b; }
  friend MatrixField operator*(double s, MatrixField a) { return a *= s; }

  void check_compatible(const MatrixField& other) const {
    if (grid_ != other.grid_ && !same_grid(*grid_, *other.grid_))
      throw DimensionError("MatrixField: grids do not match");
  }

 private:
  GridPtr grid_;
  std::vector<SymMat> blocks_;
};

/// Total trace mass sum_k w_k tr(F_k).
inline double mass(const MatrixField& field) {
  const Grid& g = *field.grid();
  std::vector<double> terms(field.cells());
  for (std::size_t k = 0; k < field.cells(); ++k)
    terms[k] = g.weight(k) * field[k].trace();
  return pairwise_sum(terms);
}

/// Weighted pairing sum_k w_k <F_k, G_k> with the Frobenius inner product.
inline double pairing(const MatrixField& a, const MatrixField& b) {
  a.check_compatible(b);
  const Grid& g = *a.grid();
  std::vector<double> terms(a.cells());
  for (std::size_t k = 0; k < a.cells(); ++k)
    terms[k] = g.weight(k) * frobenius(a[k], b[k]);
  return pairwise_sum(terms);
}

/// Weighted trace average sum_k w_k <A_k, U_k>. This is the rate of mass
/// change along the vertical velocity (A U)^sym, so tangent potentials at a
/// unit-mass measure are exactly the fields with zero trace average.
inline double trace_average(const MatrixField& base, const MatrixField& u) {
  return pairing(base, u);
}

/// <A U, U> for one block, the metric integrand.
inline double metric_term(const SymMat& a, const SymMat& u) {
  return (u.mat() * a.mat() * u.mat()).trace();
}

/// Riemannian energy of a tangent potential: sum_k w_k <A_k U_k, U_k>.
inline double fr_norm_sq(const MatrixField& base, const MatrixField& u) {
  base.check_compatible(u);
  const Grid& g = *base.grid();
  std::vector<double> terms(base.cells());
  for (std::size_t k = 0; k < base.cells(); ++k)
    terms[k] = g.weight(k) * metric_term(base[k], u[k]);
  return pairwise_sum(terms);
}

/// Orthogonal projection of a potential field onto the tangent space of the
/// unit-mass constraint. The constraint's metric gradient is the constant
/// identity potential, so the projection subtracts a multiple of Id:
///   U -> U - c * Id,  c = (sum_k w_k <A_k, U_k>) / (sum_k w_k tr A_k).
inline MatrixField project_tangent(const MatrixField& base, MatrixField u) {
  const double c = trace_average(base, u) / mass(base);
  const SymMat shift = c * SymMat::identity(base.matrix_dim());
  for (std::size_t k = 0; k < u.cells(); ++k) u[k] -= shift;
  return u;
}

constexpr double kMassTol = 1e-9;

/// A PSD matrix field with unit trace mass. Construction validates.
class MatrixMeasure {
 public:
  explicit MatrixMeasure(MatrixField field) : field_(std::move(field)) {
    for (std::size_t k = 0; k < field_.cells(); ++k) {
      if (classify_psd(field_[k], psd_tolerance(field_[k])) ==
          Definiteness::indefinite)
        throw DomainError("MatrixMeasure: block " + std::to_string(k) +
                          " is not positive semi-definite");
    }
    const double m = frs::mass(field_);
    if (std::abs(m - 1.0) > kMassTol)
      throw DomainError("MatrixMeasure: trace mass " + std::to_string(m) +
                        " is not 1 within tolerance");
  }

  const MatrixField& field() const { return field_; }
  const GridPtr& grid() const { return field_.grid(); }
  std::size_t cells() const { return field_.cells(); }
  int matrix_dim() const { return field_.matrix_dim(); }
  const SymMat& operator[](std::size_t k) const { return field_[k]; }

 private:
  MatrixField field_;
};

/// Rescales a PSD field to unit mass and validates. The usual way in.
inline MatrixMeasure make_measure(MatrixField field) {
  const double m = mass(field);
  if (!(m > 0.0)) throw DomainError("make_measure: field has nonpositive mass");
  field *= 1.0 / m;
  return MatrixMeasure(std::move(field));
}

constexpr double kZeroAverageTol = 1e-9;

/// A potential field anchored at a measure, validated to have zero weighted
/// trace average; represents the tangent vector xi_k = (A_k U_k)^sym.
class TangentField {
 public:
  TangentField(MatrixMeasure base, MatrixField potentials)
      : base_(std::move(base)), potentials_(std::move(potentials)) {
    base_.field().check_compatible(potentials_);
    const double avg = trace_average(base_.field(), potentials_);
    if (std::abs(avg) > kZeroAverageTol)
      throw DomainError("TangentField: trace average " + std::to_string(avg) +
                        " is not 0 within tolerance");
  }

  const MatrixMeasure& base() const { return base_; }
  const MatrixField& potentials() const { return potentials_; }
  const SymMat& operator[](std::size_t k) const { return potentials_[k]; }
  std::size_t cells() const { return potentials_.cells(); }

 private:
  MatrixMeasure base_;
  MatrixField potentials_;
};

inline TangentField project_tangent(const MatrixMeasure& base, MatrixField raw) {
  MatrixField projected = project_tangent(base.field(), std::move(raw));
  return TangentField(base, std::move(projected));
}

inline double fr_norm_sq(const TangentField& u) {
  return fr_norm_sq(u.base().field(), u.potentials());
}

inline double fr_norm_sq(const MatrixMeasure& base, const TangentField& u) {
  base.field().check_compatible(u.potentials());
  for (std::size_t k = 0; k < base.cells(); ++k)
    if (base[k].mat() != u.base()[k].mat())
      throw DomainError("fr_norm_sq: tangent field is based at a different measure");
  return fr_norm_sq(base.field(), u.potentials());
}

/// The identity block on every cell; on a normalized grid the mass is
/// exactly d * (1/d) = 1. This is the stationary point of the heat flow.
inline MatrixMeasure uniform_identity(GridPtr grid) {
  const int d = grid->matrix_dim();
  return MatrixMeasure(MatrixField::constant(std::move(grid), SymMat::identity(d)));
}

}  // namespace frs

#endif  // FRS_MEASURE_HPP
