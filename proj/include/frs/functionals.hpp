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

#ifndef FRS_FUNCTIONALS_HPP
#define FRS_FUNCTIONALS_HPP

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "frs/common.hpp"
#include "frs/measure.hpp"
#include "frs/symmat.hpp"

namespace frs {

/// Value of an internal-energy functional, with +infinity flagged rather
/// than thrown so line searches can reject boundary steps gracefully.
/// The gradient, when requested, is in vertical-increment form
/// G_k = (A_k F'_k)^sym - c A_k (a mass-neutral direction).
struct FunctionalValue {
  double value = 0.0;
  bool finite = true;
  std::optional<MatrixField> gradient;

  static FunctionalValue infinity() { return {kInf, false, std::nullopt}; }
};

/// Fisher-Rao gradient of an internal-energy functional from its Euclidean
/// first variation F'(A):
///   G_k = (A_k F'_k)^sym - c A_k,   c = sum_j w_j tr(A_j F'_j),
/// which is mass-neutral: sum_k w_k tr(G_k) = 0 (using mass(A) = 1).
inline MatrixField grad_fr(const MatrixField& base, const MatrixField& fprime) {
  base.check_compatible(fprime);
  const Grid& g = *base.grid();
  const std::size_t n = base.cells();
  std::vector<SymMat> out;
  out.reserve(n);
  std::vector<double> cterms(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(sym(base[k].mat() * fprime[k].mat()));
    cterms[k] = g.weight(k) * out.back().trace();
  }
  const double c = pairwise_sum(cterms);
  for (std::size_t k = 0; k < n; ++k) out[k] -= c * base[k];
  return MatrixField(base.grid(), std::move(out));
}

/// Same gradient in potential form: the projection of F' onto zero-average
/// potentials. riesz(A_k, potential_k) recovers the increment form.
inline MatrixField grad_fr_potential(const MatrixField& base,
                                     const MatrixField& fprime) {
  return project_tangent(base, fprime);
}

namespace detail {

// Eigenvalue threshold below which a block counts as boundary (entropy and
// Fisher information are +infinity there).
inline double boundary_floor(const Eigen::VectorXd& eigenvalues) {
  return absolute_floor(eigenvalues, kEigFloorRel);
}

}  // namespace detail

/// Extended entropy relative to the identity measure,
///   E(A) = sum_k w_k * 1/2 tr[A_k - log A_k - Id],
/// computed through the full integrand so the value stays meaningful for
/// slightly off-mass iterates. Flagged +infinity on the PSD boundary.
inline FunctionalValue entropy(const MatrixField& a, bool with_gradient = false) {
  const Grid& g = *a.grid();
  const std::size_t n = a.cells();
  std::vector<double> terms(n);
  std::vector<SymMat> fprime;
  if (with_gradient) fprime.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SpectralDecomp d = eig(a[k]);
    if (d.eigenvalues[0] <= detail::boundary_floor(d.eigenvalues))
      return FunctionalValue::infinity();
    double cell = 0.0;
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
      const double lam = d.eigenvalues[i];
      cell += lam - std::log(lam) - 1.0;
    }
    terms[k] = g.weight(k) * 0.5 * cell;
    if (with_gradient) {
      // E'(A) = 1/2 (Id - A^{-1}) from the same decomposition.
      Eigen::VectorXd fx(d.eigenvalues.size());
      for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
        fx[i] = 0.5 * (1.0 - 1.0 / d.eigenvalues[i]);
      fprime.push_back(
          SymMat(d.eigenvectors * fx.asDiagonal() * d.eigenvectors.transpose()));
    }
  }
  FunctionalValue out;
  out.value = pairwise_sum(terms);
  if (with_gradient)
    out.gradient = grad_fr(a, MatrixField(a.grid(), std::move(fprime)));
  return out;
}

/// Extended Fisher information
///   F(A) = 1/4 (sum_k w_k tr(A_k^{-1}) - 1),
/// the entropy dissipation rate along the heat flow; equals the squared
/// Fisher-Rao norm of the entropy gradient. Flagged +infinity on the
/// boundary.
inline FunctionalValue fisher_info(const MatrixField& a) {
  const Grid& g = *a.grid();
  const std::size_t n = a.cells();
  std::vector<double> terms(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SpectralDecomp d = eig(a[k]);
    if (d.eigenvalues[0] <= detail::boundary_floor(d.eigenvalues))
      return FunctionalValue::infinity();
    double cell = 0.0;
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
      cell += 1.0 / d.eigenvalues[i];
    terms[k] = g.weight(k) * cell;
  }
  FunctionalValue out;
  out.value = 0.25 * (pairwise_sum(terms) - 1.0);
  return out;
}

/// Von Neumann entropy S(A) = sum_k w_k tr(A_k log A_k), with the spectral
/// convention 0 log 0 = 0; finite on the whole PSD cone. Included for
/// comparison; it is not geodesically convex in this geometry.
inline FunctionalValue von_neumann(const MatrixField& a,
                                   bool with_gradient = false) {
  const Grid& g = *a.grid();
  const std::size_t n = a.cells();
  std::vector<double> terms(n);
  std::vector<SymMat> fprime;
  if (with_gradient) fprime.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SpectralDecomp d = eig(a[k]);
    const double floor = detail::boundary_floor(d.eigenvalues);
    double cell = 0.0;
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
      const double lam = d.eigenvalues[i];
      if (lam > floor) cell += lam * std::log(lam);
    }
    terms[k] = g.weight(k) * cell;
    if (with_gradient) {
      // S'(A) = log A + Id; the gradient needs a strictly positive block.
      if (d.eigenvalues[0] <= floor) return FunctionalValue::infinity();
      Eigen::VectorXd fx(d.eigenvalues.size());
      for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
        fx[i] = std::log(d.eigenvalues[i]) + 1.0;
      fprime.push_back(
          SymMat(d.eigenvectors * fx.asDiagonal() * d.eigenvectors.transpose()));
    }
  }
  FunctionalValue out;
  out.value = pairwise_sum(terms);
  if (with_gradient)
    out.gradient = grad_fr(a, MatrixField(a.grid(), std::move(fprime)));
  return out;
}

inline FunctionalValue entropy(const MatrixMeasure& a, bool with_gradient = false) {
  return entropy(a.field(), with_gradient);
}
inline FunctionalValue fisher_info(const MatrixMeasure& a) {
  return fisher_info(a.field());
}
inline FunctionalValue von_neumann(const MatrixMeasure& a,
                                   bool with_gradient = false) {
  return von_neumann(a.field(), with_gradient);
}

}  // namespace frs

#endif  // FRS_FUNCTIONALS_HPP
