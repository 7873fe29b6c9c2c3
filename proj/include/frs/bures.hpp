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

#ifndef FRS_BURES_HPP
#define FRS_BURES_HPP

#include <Eigen/Dense>
#include <cmath>

#include "frs/common.hpp"
#include "frs/symmat.hpp"

namespace frs {

/// Mean and covariance of a Gaussian; the covariance must be PSD.
struct GaussianParams {
  Eigen::VectorXd mean;
  SymMat covariance;

  GaussianParams(Eigen::VectorXd m, SymMat cov)
      : mean(std::move(m)), covariance(std::move(cov)) {
    if (mean.size() != covariance.dim())
      throw DimensionError("GaussianParams: mean/covariance dimension mismatch");
    if (classify_psd(covariance, psd_tolerance(covariance)) ==
        Definiteness::indefinite)
      throw DomainError("GaussianParams: covariance is indefinite");
  }
};

namespace detail {

inline void require_psd(const SymMat& a, const char* where) {
  if (classify_psd(a, psd_tolerance(a)) == Definiteness::indefinite)
    throw DomainError(std::string(where) + ": input matrix is indefinite");
}

}  // namespace detail

/// Squared Bures distance
///   tr A0 + tr A1 - 2 tr((A0^{1/2} A1 A0^{1/2})^{1/2}).
/// Valid for semi-definite inputs; negative round-off eigenvalues inside the
/// square roots are clamped at zero.
inline double bures_sq(const SymMat& a0, const SymMat& a1) {
  check_same_dim(a0, a1, "bures_sq");
  detail::require_psd(a0, "bures_sq");
  detail::require_psd(a1, "bures_sq");
  const SymMat r0 = spectral_sqrt(a0);
  const SymMat inner = sym(r0.mat() * a1.mat() * r0.mat());
  const double cross = spectral_sqrt(inner).trace();
  const double val = a0.trace() + a1.trace() - 2.0 * cross;
  return std::max(val, 0.0);
}

/// Squared Wasserstein distance between Gaussians:
/// |m1 - m0|^2 + bures_sq(A0, A1).
inline double gaussian_w2_sq(const GaussianParams& g0, const GaussianParams& g1) {
  if (g0.mean.size() != g1.mean.size())
    throw DimensionError("gaussian_w2_sq: dimension mismatch");
  return (g1.mean - g0.mean).squaredNorm() + bures_sq(g0.covariance, g1.covariance);
}

/// Bures-Wasserstein metric tensor at A: g_A(U, V) = tr(U A V).
inline double metric(const SymMat& a, const SymMat& u, const SymMat& v) {
  check_same_dim(a, u, "metric");
  check_same_dim(a, v, "metric");
  if (classify_psd(a, psd_tolerance(a)) != Definiteness::positive_definite)
    throw DomainError("metric: base point must be positive definite");
  return (u.mat() * a.mat() * v.mat()).trace();
}

/// Riesz map U -> xi_U = (A U)^sym identifying potentials with tangent
/// vectors; inverted by lyapunov_solve.
inline SymMat riesz(const SymMat& a, const SymMat& u) {
  check_same_dim(a, u, "riesz");
  return sym(a.mat() * u.mat());
}

// bures_dynamic_sq lives in solver.hpp: it reuses the path machinery on a
// single-cell grid with the mass constraint disabled.

}  // namespace frs

#endif  // FRS_BURES_HPP
