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

#ifndef FRS_PATH_HPP
#define FRS_PATH_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "frs/common.hpp"
#include "frs/functionals.hpp"
#include "frs/measure.hpp"
#include "frs/symmat.hpp"

namespace frs {

/// A path is constrained (every knot a unit-mass measure, the Fisher-Rao
/// setting) or unconstrained (PSD knots only, the Hellinger setting where
/// the action decouples into pointwise Bures problems).
enum class PathMode { constrained, unconstrained };

/// Uniform-in-time discrete path: n+1 knots at t_j = j/n with fixed
/// endpoints. Validates its knots on construction: PSD always, unit mass
/// additionally in constrained mode.
class Path {
 public:
  Path(GridPtr grid, std::vector<MatrixField> knots, PathMode mode)
      : grid_(std::move(grid)), knots_(std::move(knots)), mode_(mode) {
    if (knots_.size() < 3)
      throw DomainError("Path: need at least 3 knots (n_steps >= 2)");
    for (std::size_t j = 0; j < knots_.size(); ++j) {
      const MatrixField& knot = knots_[j];
      if (!same_grid(*knot.grid(), *grid_))
        throw DimensionError("Path: knot " + std::to_string(j) +
                             " lives on a different grid");
      for (std::size_t k = 0; k < knot.cells(); ++k)
        if (classify_psd(knot[k], psd_tolerance(knot[k])) ==
            Definiteness::indefinite)
          throw DomainError("Path: knot " + std::to_string(j) + ", cell " +
                            std::to_string(k) + " is indefinite");
      if (mode_ == PathMode::constrained) {
        const double m = mass(knot);
        if (std::abs(m - 1.0) > kMassTol)
          throw DomainError("Path: knot " + std::to_string(j) + " has mass " +
                            std::to_string(m));
      }
    }
  }

  const GridPtr& grid() const { return grid_; }
  PathMode mode() const { return mode_; }
  std::size_t n_intervals() const { return knots_.size() - 1; }
  std::size_t n_knots() const { return knots_.size(); }
  double dt() const { return 1.0 / double(n_intervals()); }
  double time(std::size_t j) const { return double(j) * dt(); }
  const MatrixField& knot(std::size_t j) const { return knots_[j]; }
  const std::vector<MatrixField>& knots() const { return knots_; }

 private:
  GridPtr grid_;
  std::vector<MatrixField> knots_;
  PathMode mode_;
};

inline Path reverse(const Path& path) {
  std::vector<MatrixField> knots(path.knots().rbegin(), path.knots().rend());
  return Path(path.grid(), std::move(knots), path.mode());
}

namespace detail {

// Action of one interval and, on request, its per-cell velocity potentials.
// The velocity is eliminated exactly: with midpoint state M = (A_j+A_{j+1})/2
// and difference quotient S = (A_{j+1}-A_j)/dt, the potential U solves
// M U + U M = 2 S, and the interval integrand is
//   <M U, U> = <S, U> = sum_{ab} 2 Shat_ab^2 / (lam_a + lam_b)
// in M's eigenbasis. Returns false (boundary) if a midpoint block is not
// numerically positive definite.
struct IntervalData {
  double weighted_sum = 0.0;          // sum_k w_k <S_k, U_k>
  std::vector<SymMat> potentials;     // U_k, filled when requested
  std::vector<SymMat> potentials_sq;  // U_k^2, filled when requested
};

inline bool eval_interval(const Grid& grid, const MatrixField& left,
                          const MatrixField& right, double dt,
                          bool with_derivatives, IntervalData& out) {
  const std::size_t cells = grid.cells();
  std::vector<double> terms(cells);
  if (with_derivatives) {
    out.potentials.clear();
    out.potentials_sq.clear();
    out.potentials.reserve(cells);
    out.potentials_sq.reserve(cells);
  }
  for (std::size_t k = 0; k < cells; ++k) {
    const SymMat mid = SymMat(0.5 * (left[k].mat() + right[k].mat()));
    const SpectralDecomp d = eig(mid);
    const Eigen::VectorXd& lam = d.eigenvalues;
    if (lam[0] <= absolute_floor(lam)) return false;
    const Eigen::MatrixXd s = (right[k].mat() - left[k].mat()) / dt;
    const Eigen::MatrixXd sh = d.eigenvectors.transpose() * s * d.eigenvectors;
    Eigen::MatrixXd uh(sh.rows(), sh.cols());
    double cell = 0.0;
    for (Eigen::Index a = 0; a < sh.rows(); ++a)
      for (Eigen::Index b = 0; b < sh.cols(); ++b) {
        uh(a, b) = 2.0 * sh(a, b) / (lam[a] + lam[b]);
        cell += sh(a, b) * uh(a, b);
      }
    terms[k] = grid.weight(k) * cell;
    if (with_derivatives) {
      out.potentials.push_back(
          SymMat(d.eigenvectors * uh * d.eigenvectors.transpose()));
      out.potentials_sq.push_back(
          SymMat(d.eigenvectors * (uh * uh) * d.eigenvectors.transpose()));
    }
  }
  out.weighted_sum = pairwise_sum(terms);
  return true;
}

// Discrete action over a knot sequence; kInf on boundary intervals.
inline double action_of_knots(const Grid& grid,
                              const std::vector<MatrixField>& knots,
                              std::vector<double>* per_interval = nullptr) {
  const std::size_t n = knots.size() - 1;
  const double dt = 1.0 / double(n);
  std::vector<double> sums(n);
  IntervalData data;
  for (std::size_t j = 0; j < n; ++j) {
    if (!eval_interval(grid, knots[j], knots[j + 1], dt, false, data))
      return kInf;
    sums[j] = data.weighted_sum;
  }
  if (per_interval) {
    per_interval->resize(n);
    for (std::size_t j = 0; j < n; ++j) (*per_interval)[j] = dt * sums[j];
  }
  return dt * pairwise_sum(sums);
}

// Trapezoidal time quadrature of the Fisher information over knots;
// kInf if any knot touches the boundary.
inline double fisher_of_knots(const std::vector<MatrixField>& knots) {
  const std::size_t n = knots.size() - 1;
  const double dt = 1.0 / double(n);
  std::vector<double> vals(knots.size());
  for (std::size_t j = 0; j < knots.size(); ++j) {
    const FunctionalValue f = fisher_info(knots[j]);
    if (!f.finite) return kInf;
    vals[j] = f.value;
  }
  std::vector<double> terms(n);
  for (std::size_t j = 0; j < n; ++j) terms[j] = 0.5 * (vals[j] + vals[j + 1]);
  return dt * pairwise_sum(terms);
}

}  // namespace detail

/// Discrete kinetic action
///   sum_j dt sum_k w_k <A_bar_jk U_jk, U_jk>,
/// with midpoint states, forward difference quotients, and velocities
/// recovered through the Lyapunov solve. Returns +infinity if a midpoint
/// block is numerically singular (line-search rejection signal).
inline double path_action(const Path& path) {
  return detail::action_of_knots(*path.grid(), path.knots());
}

/// Per-interval contributions of the action; a converged geodesic has these
/// nearly equal (constant-speed parametrization).
inline std::vector<double> per_interval_action(const Path& path) {
  std::vector<double> out;
  if (std::isinf(detail::action_of_knots(*path.grid(), path.knots(), &out)))
    throw DomainError("per_interval_action: path touches the PSD boundary");
  return out;
}

/// Trapezoidal integral of the Fisher information along the path; the
/// Schrodinger objective applies the epsilon^2 factor to this value.
inline double path_fisher(const Path& path) {
  return detail::fisher_of_knots(path.knots());
}

namespace detail {

// Euclidean gradient of action + eps^2 * fisher with respect to the interior
// knots (entrywise partials, quadrature weights folded in). For the interior
// knot i the two adjacent intervals contribute
//   dPhi/dA_i = w_k [ 2 (U_{i-1,k} - U_{i,k}) - dt/2 (U_{i-1,k}^2 + U_{i,k}^2) ],
// obtained from the envelope identities dphi/dS = 2U and dphi/dM = -U^2 of
// the per-interval optimum phi = <S, U(M,S)>. The Fisher term adds the
// trapezoid derivative -dt eps^2 w_k A_ik^{-2} / 4.
struct ObjectiveEval {
  double action = 0.0;
  double fisher = 0.0;
  double objective = 0.0;
  bool finite = true;
  std::vector<MatrixField> euclidean_grad;  // one field per interior knot
};

inline ObjectiveEval eval_objective_with_gradient(
    const Grid& grid, const std::vector<MatrixField>& knots, double epsilon) {
  const std::size_t n = knots.size() - 1;
  const double dt = 1.0 / double(n);
  const std::size_t cells = grid.cells();
  ObjectiveEval out;

  std::vector<IntervalData> intervals(n);
  std::vector<double> sums(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!eval_interval(grid, knots[j], knots[j + 1], dt, true, intervals[j])) {
      out.finite = false;
      out.objective = kInf;
      return out;
    }
    sums[j] = intervals[j].weighted_sum;
  }
  out.action = dt * pairwise_sum(sums);

  const bool with_fisher = epsilon > 0.0;
  // Knot inverse-squares for the Fisher derivative, interior knots only.
  std::vector<std::vector<SymMat>> inv_sq;
  if (with_fisher) {
    out.fisher = fisher_of_knots(knots);
    if (std::isinf(out.fisher)) {
      out.finite = false;
      out.objective = kInf;
      return out;
    }
    inv_sq.resize(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      inv_sq[i - 1].reserve(cells);
      for (std::size_t k = 0; k < cells; ++k)
        inv_sq[i - 1].push_back(spectral_fn(
            knots[i][k], [](double x) { return 1.0 / (x * x); },
            0.0, FloorPolicy::strict));
    }
  }
  out.objective = out.action + epsilon * epsilon * out.fisher;

  out.euclidean_grad.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<SymMat> g;
    g.reserve(cells);
    for (std::size_t k = 0; k < cells; ++k) {
      const IntervalData& prev = intervals[i - 1];
      const IntervalData& next = intervals[i];
      Eigen::MatrixXd e =
          2.0 * (prev.potentials[k].mat() - next.potentials[k].mat()) -
          (0.5 * dt) *
              (prev.potentials_sq[k].mat() + next.potentials_sq[k].mat());
      if (with_fisher)
        e -= (epsilon * epsilon * dt * 0.25) * inv_sq[i - 1][k].mat();
      g.push_back(SymMat(grid.weight(k) * e));
    }
    out.euclidean_grad.push_back(MatrixField(knots[i].grid(), std::move(g)));
  }
  return out;
}

inline double eval_objective(const Grid& grid,
                             const std::vector<MatrixField>& knots,
                             double epsilon) {
  const double action = action_of_knots(grid, knots);
  if (std::isinf(action)) return kInf;
  if (epsilon <= 0.0) return action;
  const double fisher = fisher_of_knots(knots);
  return action + epsilon * epsilon * fisher;
}

}  // namespace detail

}  // namespace frs

#endif  // FRS_PATH_HPP
