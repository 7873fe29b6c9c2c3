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

#ifndef FRS_SOLVER_HPP
#define FRS_SOLVER_HPP

#include <cmath>
#include <deque>
#include <limits>
#include <utility>
#include <vector>

#include "frs/bures.hpp"
#include "frs/common.hpp"
#include "frs/functionals.hpp"
#include "frs/measure.hpp"
#include "frs/path.hpp"

namespace frs {

struct SolverConfig {
  int n_steps = 32;
  int max_iter = 5000;
  double grad_tol = 1e-6;
  double eig_floor = 1e-8;
  double step_init = 1.0;
  double epsilon = 0.0;  // Schrodinger temperature; 0 gives the geodesic problem
  long long seed = 0;    // used by manifest-driven endpoint generation
  int lbfgs_memory = 10;
};

/// Feasibility bookkeeping over all accepted iterates of a solve.
struct SolverDiagnostics {
  double max_mass_drift = 0.0;        // max |mass - 1| per knot (constrained)
  double min_eigenvalue = kInf;       // min block eigenvalue per knot
  double max_tangent_average = 0.0;   // max |sum w <A, U>| of projected gradients
  int line_search_failures = 0;
};

struct SolveReport {
  double value = 0.0;        // action_part + epsilon^2 * fisher_part
  double action_part = 0.0;
  double fisher_part = 0.0;
  double epsilon = 0.0;
  int iterations = 0;
  double final_grad_norm = 0.0;
  bool converged = false;
  Path path;
  SolverDiagnostics diagnostics;
};

namespace detail {

inline void validate_config(const SolverConfig& cfg) {
  if (cfg.n_steps < 2) throw DomainError("SolverConfig: n_steps must be >= 2");
  if (!(cfg.grad_tol > 0.0)) throw DomainError("SolverConfig: grad_tol must be > 0");
  if (cfg.eig_floor < 0.0) throw DomainError("SolverConfig: eig_floor must be >= 0");
  if (!(cfg.step_init > 0.0)) throw DomainError("SolverConfig: step_init must be > 0");
  if (cfg.max_iter < 0) throw DomainError("SolverConfig: max_iter must be >= 0");
  if (cfg.epsilon < 0.0) throw DomainError("SolverConfig: epsilon must be >= 0");
  if (cfg.lbfgs_memory < 0) throw DomainError("SolverConfig: lbfgs_memory must be >= 0");
}

inline void validate_endpoint(const MatrixField& a, double eig_floor,
                              PathMode mode, const char* which) {
  for (std::size_t k = 0; k < a.cells(); ++k) {
    const SpectralDecomp d = eig(a[k]);
    if (d.eigenvalues[0] < eig_floor)
      throw DomainError(std::string(which) + ": cell " + std::to_string(k) +
                        " has min eigenvalue " +
                        std::to_string(d.eigenvalues[0]) +
                        " below the solver floor");
  }
  if (mode == PathMode::constrained) {
    const double m = mass(a);
    if (std::abs(m - 1.0) > kMassTol)
      throw DomainError(std::string(which) + ": mass " + std::to_string(m) +
                        " is not 1");
  }
}

// Returns the iterate to the feasible set: eigenvalues clamped at the floor
// (with headroom so the subsequent renormalization cannot undercut it), then
// mass rescaled to 1 in constrained mode. Iterated to a fixed point; the
// reported statistics describe the final state.
struct RetractionStats {
  double mass_drift = 0.0;
  double min_eigenvalue = kInf;
};

inline RetractionStats retract_knot(MatrixField& knot, double eig_floor,
                                    PathMode mode) {
  constexpr double kClampHeadroom = 1.5;
  RetractionStats stats;
  for (int pass = 0; pass < 4; ++pass) {
    bool clamped = false;
    double min_lam = kInf;
    for (std::size_t k = 0; k < knot.cells(); ++k) {
      SpectralDecomp d = eig(knot[k]);
      if (d.eigenvalues[0] < eig_floor) {
        clamped = true;
        Eigen::VectorXd lam = d.eigenvalues;
        for (Eigen::Index i = 0; i < lam.size(); ++i)
          lam[i] = std::max(lam[i], kClampHeadroom * eig_floor);
        knot[k] = SymMat(d.eigenvectors * lam.asDiagonal() *
                         d.eigenvectors.transpose());
        min_lam = std::min(min_lam, kClampHeadroom * eig_floor);
      } else {
        min_lam = std::min(min_lam, d.eigenvalues[0]);
      }
    }
    double drift = 0.0;
    if (mode == PathMode::constrained) {
      const double m = mass(knot);
      drift = std::abs(m - 1.0);
      if (drift > 1e-13) {
        knot *= 1.0 / m;
        min_lam /= m;
      }
    }
    stats.min_eigenvalue = min_lam;
    if (!clamped && drift <= 1e-13) break;
    if (mode == PathMode::unconstrained && !clamped) break;
  }
  if (mode == PathMode::constrained)
    stats.mass_drift = std::abs(mass(knot) - 1.0);
  return stats;
}

inline std::size_t interior_dof(const std::vector<MatrixField>& knots) {
  const std::size_t n = knots.size() - 1;
  const int d = knots[0].matrix_dim();
  return (n - 1) * knots[0].cells() * std::size_t(d) * std::size_t(d);
}

// Stacks the interior-knot fields (or per-knot gradient fields) into one
// flat vector, column-major per block.
inline Eigen::VectorXd pack_fields(const std::vector<MatrixField>& fields,
                                   std::size_t dof) {
  Eigen::VectorXd x(dof);
  std::size_t off = 0;
  for (const MatrixField& f : fields)
    for (std::size_t k = 0; k < f.cells(); ++k) {
      const Eigen::MatrixXd& m = f[k].mat();
      const std::size_t len = std::size_t(m.size());
      x.segment(off, len) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
      off += len;
    }
  return x;
}

inline std::vector<MatrixField> interior_fields(
    const std::vector<MatrixField>& knots) {
  return std::vector<MatrixField>(knots.begin() + 1, knots.end() - 1);
}

// Applies the packed step x -> knots + alpha * direction to the interior
// knots and retracts each one; returns aggregate retraction stats.
inline RetractionStats apply_step(const std::vector<MatrixField>& knots,
                                  const Eigen::VectorXd& direction, double alpha,
                                  double eig_floor, PathMode mode,
                                  std::vector<MatrixField>& out) {
  const std::size_t n = knots.size() - 1;
  const int d = knots[0].matrix_dim();
  out = knots;
  std::size_t off = 0;
  RetractionStats agg;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t k = 0; k < knots[i].cells(); ++k) {
      Eigen::MatrixXd step = Eigen::Map<const Eigen::MatrixXd>(
          direction.data() + off, d, d);
      out[i][k] = SymMat(knots[i][k].mat() + alpha * step);
      off += std::size_t(d) * std::size_t(d);
    }
    const RetractionStats s = retract_knot(out[i], eig_floor, mode);
    agg.mass_drift = std::max(agg.mass_drift, s.mass_drift);
    agg.min_eigenvalue = std::min(agg.min_eigenvalue, s.min_eigenvalue);
  }
  return agg;
}

// Limited-memory BFGS history with curvature screening and gamma-scaled
// initial Hessian.
class LbfgsHistory {
 public:
  explicit LbfgsHistory(int memory) : memory_(memory) {}

  void push(Eigen::VectorXd s, Eigen::VectorXd y) {
    const double sy = s.dot(y);
    if (!(sy > 1e-12 * s.norm() * y.norm())) return;  // skip flat curvature
    gamma_ = sy / y.dot(y);
    pairs_.push_back({std::move(s), std::move(y), 1.0 / sy});
    while (int(pairs_.size()) > memory_) pairs_.pop_front();
  }

  Eigen::VectorXd direction(const Eigen::VectorXd& grad) const {
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(pairs_.size());
    for (std::size_t i = pairs_.size(); i-- > 0;) {
      const Pair& p = pairs_[i];
      alpha[i] = p.rho * p.s.dot(q);
      q -= alpha[i] * p.y;
    }
    q *= gamma_;
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const Pair& p = pairs_[i];
      const double beta = p.rho * p.y.dot(q);
      q += (alpha[i] - beta) * p.s;
    }
    return -q;
  }

  void clear() {
    pairs_.clear();
    gamma_ = 1.0;
  }

 private:
  struct Pair {
    Eigen::VectorXd s, y;
    double rho;
  };
  int memory_;
  std::deque<Pair> pairs_;
  double gamma_ = 1.0;
};

// Gradient bundle at one iterate: the Euclidean gradient fields (for true
// directional derivatives), the Fisher-Rao gradient increments (the descent
// frame packed into the quasi-Newton vectors), and the squared gradient norm
// in the path metric.
struct GradientFrame {
  std::vector<MatrixField> euclidean;  // E_ik, quadrature weights folded in
  std::vector<MatrixField> increment;  // xi_ik = (A_ik U_ik)^sym
  double norm_sq = 0.0;
  double max_tangent_average = 0.0;
};

inline GradientFrame build_frame(const Grid& grid,
                                 const std::vector<MatrixField>& knots,
                                 std::vector<MatrixField> euclidean,
                                 PathMode mode) {
  GradientFrame frame;
  frame.euclidean = std::move(euclidean);
  const std::size_t n = knots.size() - 1;
  std::vector<double> norm_terms(n - 1);
  frame.increment.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const MatrixField& base = knots[i];
    MatrixField fprime = frame.euclidean[i - 1];
    for (std::size_t k = 0; k < fprime.cells(); ++k)
      fprime[k] = (1.0 / grid.weight(k)) * fprime[k];
    MatrixField potential = (mode == PathMode::constrained)
                                ? project_tangent(base, std::move(fprime))
                                : std::move(fprime);
    if (mode == PathMode::constrained)
      frame.max_tangent_average =
          std::max(frame.max_tangent_average,
                   std::abs(trace_average(base, potential)));
    std::vector<SymMat> xi;
    xi.reserve(potential.cells());
    for (std::size_t k = 0; k < potential.cells(); ++k)
      xi.push_back(riesz(base[k], potential[k]));
    norm_terms[i - 1] = fr_norm_sq(base, potential);
    frame.increment.push_back(MatrixField(base.grid(), std::move(xi)));
  }
  frame.norm_sq = pairwise_sum(norm_terms);
  return frame;
}

struct MinimizeResult {
  std::vector<MatrixField> knots;
  double objective = 0.0;
  double action = 0.0;
  double fisher = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  SolverDiagnostics diag;
};

// Core path minimizer: projected Fisher-Rao descent with limited-memory
// quasi-Newton acceleration and Armijo backtracking (c = 1/4, shrink 1/2).
// Interior knots are the unknowns; every accepted iterate is retracted.
inline MinimizeResult minimize_path(GridPtr grid, const MatrixField& a0,
                                    const MatrixField& a1,
                                    const SolverConfig& cfg, PathMode mode,
                                    const std::vector<MatrixField>* warm_start =
                                        nullptr) {
  validate_config(cfg);
  a0.check_compatible(a1);
  validate_endpoint(a0, cfg.eig_floor, mode, "minimize_path: left endpoint");
  validate_endpoint(a1, cfg.eig_floor, mode, "minimize_path: right endpoint");

  MinimizeResult res;
  std::vector<MatrixField>& knots = res.knots;
  const std::size_t n = std::size_t(cfg.n_steps);
  if (warm_start) {
    if (warm_start->size() != n + 1)
      throw DimensionError("minimize_path: warm start has wrong knot count");
    knots = *warm_start;
    knots.front() = a0;
    knots.back() = a1;
  } else {
    knots.reserve(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const double t = double(j) / double(n);
      knots.push_back((1.0 - t) * a0 + t * a1);
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    const RetractionStats s = retract_knot(knots[i], cfg.eig_floor, mode);
    res.diag.max_mass_drift = std::max(res.diag.max_mass_drift, s.mass_drift);
    res.diag.min_eigenvalue = std::min(res.diag.min_eigenvalue, s.min_eigenvalue);
  }

  const std::size_t dof = interior_dof(knots);
  ObjectiveEval eval = eval_objective_with_gradient(*grid, knots, cfg.epsilon);
  if (!eval.finite)
    throw DomainError("minimize_path: initial path touches the PSD boundary");
  GradientFrame frame =
      build_frame(*grid, knots, std::move(eval.euclidean_grad), mode);
  res.diag.max_tangent_average =
      std::max(res.diag.max_tangent_average, frame.max_tangent_average);

  LbfgsHistory history(cfg.lbfgs_memory);
  int stall_count = 0;
  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    if (std::sqrt(frame.norm_sq) <= cfg.grad_tol) break;

    const Eigen::VectorXd g = pack_fields(frame.increment, dof);
    const Eigen::VectorXd e = pack_fields(frame.euclidean, dof);
    Eigen::VectorXd dir = history.direction(g);
    double slope = e.dot(dir);
    if (!(slope < -1e-12 * e.norm() * dir.norm())) {
      dir = -g;
      slope = e.dot(dir);
    }

    double alpha = cfg.step_init;
    bool accepted = false;
    std::vector<MatrixField> trial;
    RetractionStats trial_stats;
    double trial_obj = kInf;
    for (int ls = 0; ls < 60; ++ls) {
      trial_stats = apply_step(knots, dir, alpha, cfg.eig_floor, mode, trial);
      trial_obj = eval_objective(*grid, trial, cfg.epsilon);
      if (trial_obj <= eval.objective + 0.25 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      ++res.diag.line_search_failures;
      break;
    }

    const Eigen::VectorXd x_old = pack_fields(interior_fields(knots), dof);
    const Eigen::VectorXd x_new = pack_fields(interior_fields(trial), dof);
    const double decrease = eval.objective - trial_obj;
    knots = std::move(trial);
    res.diag.max_mass_drift =
        std::max(res.diag.max_mass_drift, trial_stats.mass_drift);
    res.diag.min_eigenvalue =
        std::min(res.diag.min_eigenvalue, trial_stats.min_eigenvalue);

    ObjectiveEval eval_new =
        eval_objective_with_gradient(*grid, knots, cfg.epsilon);
    if (!eval_new.finite)
      throw NumericError("minimize_path: accepted iterate became infeasible");
    GradientFrame frame_new =
        build_frame(*grid, knots, std::move(eval_new.euclidean_grad), mode);
    res.diag.max_tangent_average = std::max(res.diag.max_tangent_average,
                                            frame_new.max_tangent_average);
    history.push(x_new - x_old,
                 pack_fields(frame_new.increment, dof) - g);
    eval = std::move(eval_new);
    frame = std::move(frame_new);

    if (decrease <= 1e-15 * std::max(1.0, std::abs(eval.objective))) {
      if (++stall_count >= 3) {
        ++iter;
        break;
      }
    } else {
      stall_count = 0;
    }
  }

  res.iterations = iter;
  res.grad_norm = std::sqrt(frame.norm_sq);
  res.converged = res.grad_norm <= cfg.grad_tol;
  res.action = detail::action_of_knots(*grid, knots);
  res.fisher = detail::fisher_of_knots(knots);
  res.objective = res.action + cfg.epsilon * cfg.epsilon * res.fisher;
  return res;
}

inline SolveReport make_report(GridPtr grid, MinimizeResult&& r,
                               const SolverConfig& cfg, PathMode mode) {
  SolveReport report{
      r.objective,
      r.action,
      r.fisher,
      cfg.epsilon,
      r.iterations,
      r.grad_norm,
      r.converged,
      Path(std::move(grid), std::move(r.knots), mode),
      r.diag};
  return report;
}

}  // namespace detail

/// Fisher-Rao geodesic between two measures: minimizes the discrete action
/// over interior knots. The squared distance estimate is report.value.
/// Non-convergence is reported through the flag, not thrown.
inline SolveReport solve_geodesic(const MatrixMeasure& a0, const MatrixMeasure& a1,
                                  SolverConfig cfg) {
  cfg.epsilon = 0.0;
  GridPtr grid = a0.grid();
  detail::MinimizeResult r = detail::minimize_path(
      grid, a0.field(), a1.field(), cfg, PathMode::constrained);
  return detail::make_report(grid, std::move(r), cfg, PathMode::constrained);
}

/// Schrodinger problem: minimizes action + epsilon^2 * fisher over paths in
/// the measure space. At epsilon = 0 this is exactly solve_geodesic.
inline SolveReport solve_schrodinger(const MatrixMeasure& a0,
                                     const MatrixMeasure& a1,
                                     const SolverConfig& cfg) {
  GridPtr grid = a0.grid();
  detail::MinimizeResult r = detail::minimize_path(
      grid, a0.field(), a1.field(), cfg, PathMode::constrained);
  return detail::make_report(grid, std::move(r), cfg, PathMode::constrained);
}

/// Hellinger-type problem: the same action without the mass constraint, so
/// the optimal value decouples into pointwise Bures problems,
/// value = sum_k w_k 4 bures_sq(A0_k, A1_k) at epsilon = 0.
inline SolveReport solve_hellinger(const MatrixField& a0, const MatrixField& a1,
                                   const SolverConfig& cfg) {
  GridPtr grid = a0.grid();
  detail::MinimizeResult r = detail::minimize_path(
      grid, a0, a1, cfg, PathMode::unconstrained);
  return detail::make_report(grid, std::move(r), cfg, PathMode::unconstrained);
}

/// Dynamic form of the squared Bures distance: minimized single-matrix
/// action on a unit single-cell grid; result/4 matches bures_sq. Throws on
/// non-convergence (this entry point is used as an oracle cross-check).
inline double bures_dynamic_sq(const SymMat& a0, const SymMat& a1, int n_steps,
                               SolverConfig cfg) {
  check_same_dim(a0, a1, "bures_dynamic_sq");
  cfg.n_steps = n_steps;
  cfg.epsilon = 0.0;
  GridPtr grid = Grid::single_cell_unit(a0.dim());
  const MatrixField f0(grid, {a0});
  const MatrixField f1(grid, {a1});
  detail::MinimizeResult r =
      detail::minimize_path(grid, f0, f1, cfg, PathMode::unconstrained);
  if (!r.converged)
    throw ConvergenceError(
        "bures_dynamic_sq: optimizer stopped above tolerance", r.grad_norm);
  return r.objective;
}

struct GammaRow {
  double epsilon = 0.0;
  double value = 0.0;
  double gap = 0.0;  // value - geodesic value
};

struct GammaSweepResult {
  double geodesic_value = 0.0;
  SolveReport geodesic_report;
  std::vector<GammaRow> rows;
  std::vector<SolveReport> reports;
};

/// Schrodinger values along a decreasing epsilon list, warm-starting each
/// solve from the previous optimum, compared against the geodesic value.
inline GammaSweepResult gamma_sweep(const MatrixMeasure& a0,
                                    const MatrixMeasure& a1,
                                    const std::vector<double>& eps_list,
                                    const SolverConfig& cfg) {
  if (eps_list.empty()) throw DomainError("gamma_sweep: empty epsilon list");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i + 1]))
      throw DomainError("gamma_sweep: epsilon list must be strictly decreasing");
  if (eps_list.back() < 0.0)
    throw DomainError("gamma_sweep: negative epsilon");

  GridPtr grid = a0.grid();
  SolverConfig geo_cfg = cfg;
  geo_cfg.epsilon = 0.0;
  detail::MinimizeResult geo = detail::minimize_path(
      grid, a0.field(), a1.field(), geo_cfg, PathMode::constrained);
  const double geo_value = geo.objective;
  GammaSweepResult out{
      geo_value,
      detail::make_report(grid, std::move(geo), geo_cfg, PathMode::constrained),
      {},
      {}};

  const std::vector<MatrixField>* warm = nullptr;
  for (double eps : eps_list) {
    SolverConfig run_cfg = cfg;
    run_cfg.epsilon = eps;
    detail::MinimizeResult r = detail::minimize_path(
        grid, a0.field(), a1.field(), run_cfg, PathMode::constrained, warm);
    out.rows.push_back({eps, r.objective, r.objective - out.geodesic_value});
    out.reports.push_back(
        detail::make_report(grid, std::move(r), run_cfg, PathMode::constrained));
    warm = &out.reports.back().path.knots();
  }
  return out;
}

/// Maximum violation of the 1/2-geodesic-convexity inequality of the entropy
/// along a converged geodesic:
///   E(gamma_t) <= (1-t) E_0 + t E_1 - t(1-t)/4 * FR^2.
/// Nonpositive up to discretization slack for true geodesics.
inline double geodesic_convexity_check(const SolveReport& report) {
  const Path& path = report.path;
  const double e0 = entropy(path.knot(0)).value;
  const double e1 = entropy(path.knot(path.n_intervals())).value;
  double worst = -kInf;
  for (std::size_t j = 0; j <= path.n_intervals(); ++j) {
    const double t = path.time(j);
    const FunctionalValue ej = entropy(path.knot(j));
    if (!ej.finite) return kInf;
    const double bound =
        (1.0 - t) * e0 + t * e1 - 0.25 * t * (1.0 - t) * report.value;
    worst = std::max(worst, ej.value - bound);
  }
  return worst;
}

}  // namespace frs

#endif  // FRS_SOLVER_HPP
