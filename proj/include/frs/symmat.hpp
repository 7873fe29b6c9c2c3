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

#ifndef FRS_SYMMAT_HPP
#define FRS_SYMMAT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "frs/common.hpp"

namespace frs {

/// Dense real symmetric matrix. Symmetry is enforced at construction by
/// exact averaging, so entries(i,j) == entries(j,i) holds bit-for-bit and
/// every downstream spectral routine may assume it.
class SymMat {
 public:
  explicit SymMat(Eigen::MatrixXd m) {
    if (m.rows() != m.cols())
      throw DimensionError("SymMat: input must be square, got " +
                           std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()));
    if (m.rows() < 1) throw DimensionError("SymMat: dimension must be >= 1");
    // (a+b)/2 == (b+a)/2 exactly, so both triangles agree bit-for-bit.
    mat_ = 0.5 * (m + m.transpose().eval());
  }

  static SymMat identity(int d) { return SymMat(Eigen::MatrixXd::Identity(d, d)); }
  static SymMat zero(int d) { return SymMat(Eigen::MatrixXd::Zero(d, d)); }
  static SymMat diagonal(const Eigen::VectorXd& diag) {
    return SymMat(Eigen::MatrixXd(diag.asDiagonal()));
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  double operator()(int i, int j) const { return mat_(i, j); }
  const Eigen::MatrixXd& mat() const { return mat_; }

  double trace() const { return mat_.trace(); }
  double norm() const { return mat_.norm(); }  // Frobenius

  SymMat& operator+=(const SymMat& o) {
    require_same_dim(o, "SymMat::operator+=");
    mat_ += o.mat_;
    return *this;
  }
  SymMat& operator-=(const SymMat& o) {
    require_same_dim(o, "SymMat::operator-=");
    mat_ -= o.mat_;
    return *this;
  }
  SymMat& operator*=(double c) { mat_ *= c; return *this; }

  friend SymMat operator+(SymMat a, const SymMat& b) { a += b; return a; }
  friend SymMat operator-(SymMat a, const SymMat& b) { a -= b; return a; }
  friend SymMat operator*(double c, SymMat a) { a *= c; return a; }
  friend SymMat operator*(SymMat a, double c) { a *= c; return a; }
  friend SymMat operator-(SymMat a) { a *= -1.0; return a; }

 private:
  void require_same_dim(const SymMat& o, const char* where) const {
    if (mat_.rows() != o.mat_.rows())
      throw DimensionError(std::string(where) + ": dimension mismatch " +
                           std::to_string(mat_.rows()) + " vs " +
                           std::to_string(o.mat_.rows()));
  }

  Eigen::MatrixXd mat_;
};

/// Eigendecomposition of a SymMat: S = Q diag(lambda) Q^T with eigenvalues
/// in nondecreasing order and orthonormal columns in Q.
struct SpectralDecomp {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  Eigen::MatrixXd reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

/// Symmetric part (M + M^T)/2.
inline SymMat sym(const Eigen::MatrixXd& m) { return SymMat(m); }
inline SymMat sym(const SymMat& m) { return m; }

inline SymMat operator+(const SymMat& a, const Eigen::MatrixXd& b) {
  return SymMat(a.mat() + b);
}

inline void check_same_dim(const SymMat& a, const SymMat& b, const char* where) {
  if (a.dim() != b.dim())
    throw DimensionError(std::string(where) + ": dimension mismatch " +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

inline SpectralDecomp eig(const SymMat& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.mat());
  if (es.info() != Eigen::Success)
    throw NumericError("eig: eigen-solver did not converge for dim " +
                       std::to_string(s.dim()));
  return SpectralDecomp{es.eigenvalues(), es.eigenvectors()};
}

enum class FloorPolicy { strict, clamp };

/// Spectral matrix function Q diag(f(lambda)) Q^T. Eigenvalues below `floor`
/// are raised to it (clamp) or rejected (strict); callers pick the floor to
/// match the domain of f.
template <typename F>
SymMat spectral_fn(const SymMat& s, F&& f, double floor = 0.0,
                   FloorPolicy policy = FloorPolicy::clamp) {
  SpectralDecomp d = eig(s);
  Eigen::VectorXd fx(d.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
    double lam = d.eigenvalues[i];
    if (lam < floor) {
      if (policy == FloorPolicy::strict) {
        std::ostringstream os;
        os << "spectral_fn: eigenvalue " << lam << " below floor " << floor;
        throw SingularMatrixError(os.str());
      }
      lam = floor;
    }
    fx[i] = f(lam);
  }
  return SymMat(d.eigenvectors * fx.asDiagonal() * d.eigenvectors.transpose());
}

inline SymMat spectral_sqrt(const SymMat& s, double floor = 0.0) {
  return spectral_fn(s, [](double x) { return std::sqrt(x); }, floor);
}

inline SymMat spectral_exp(const SymMat& s) {
  return spectral_fn(s, [](double x) { return std::exp(x); },
                     -std::numeric_limits<double>::infinity());
}

/// Frobenius scalar product tr(M N^T).
inline double frobenius(const SymMat& m, const SymMat& n) {
  check_same_dim(m, n, "frobenius");
  return m.mat().cwiseProduct(n.mat()).sum();
}

enum class Definiteness { positive_definite, semi_definite, indefinite };

inline Definiteness classify_psd(const SymMat& s, double tol) {
  const Eigen::VectorXd lam = eig(s).eigenvalues;
  const double lam_min = lam[0];
  if (lam_min > tol) return Definiteness::positive_definite;
  if (lam_min >= -tol) return Definiteness::semi_definite;
  return Definiteness::indefinite;
}

/// Scale-aware PSD tolerance: 1e-12 for O(1) matrices, relative above that.
inline double psd_tolerance(const SymMat& s) {
  return kPsdTol * std::max(1.0, s.mat().cwiseAbs().maxCoeff());
}

/// Absolute eigenvalue floor derived from the relative policy.
inline double absolute_floor(const Eigen::VectorXd& eigenvalues,
                             double rel = kEigFloorRel) {
  const double lam_max = eigenvalues[eigenvalues.size() - 1];
  return rel * std::max(lam_max, 1.0);
}

namespace detail {

// Core Lyapunov solve given the eigendecomposition of A: in A's eigenbasis
// U_ij = 2 S_ij / (lambda_i + lambda_j). No definiteness check here.
inline SymMat lyapunov_solve_decomposed(const SpectralDecomp& a, const SymMat& s) {
  const Eigen::MatrixXd& q = a.eigenvectors;
  Eigen::MatrixXd sh = q.transpose() * s.mat() * q;
  const Eigen::VectorXd& lam = a.eigenvalues;
  for (Eigen::Index i = 0; i < sh.rows(); ++i)
    for (Eigen::Index j = 0; j < sh.cols(); ++j)
      sh(i, j) = 2.0 * sh(i, j) / (lam[i] + lam[j]);
  return SymMat(q * sh * q.transpose());
}

}  // namespace detail

/// Solves the Lyapunov equation A U + U A = 2 S for symmetric U; this is the
/// inverse of U -> (A U)^sym, recovering a potential from a tangent vector.
inline SymMat lyapunov_solve(const SymMat& a, const SymMat& s,
                             double floor_rel = kEigFloorRel) {
  check_same_dim(a, s, "lyapunov_solve");
  SpectralDecomp d = eig(a);
  const double floor = floor_rel * std::max(d.eigenvalues[d.eigenvalues.size() - 1], 1.0);
  if (d.eigenvalues[0] <= floor) {
    std::ostringstream os;
    os << "lyapunov_solve: matrix not positive definite (min eigenvalue "
       << d.eigenvalues[0] << ", floor " << floor << ")";
    throw SingularMatrixError(os.str());
  }
  return detail::lyapunov_solve_decomposed(d, s);
}

}  // namespace frs

#endif  // FRS_SYMMAT_HPP
