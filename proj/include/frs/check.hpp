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

#ifndef FRS_CHECK_HPP
#define FRS_CHECK_HPP

#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "frs/bures.hpp"
#include "frs/functionals.hpp"
#include "frs/heat_flow.hpp"
#include "frs/io.hpp"
#include "frs/path.hpp"
#include "frs/random.hpp"
#include "frs/solver.hpp"

namespace frs {

/// One invariant group's verdict.
struct CheckResult {
  std::string group;
  bool pass;
  std::string detail;  // first failure, or a summary statistic
};

namespace check_detail {

// Test hook: when the environment variable FRS_CHECK_INJECT_FAULT is set,
// one computed quantity is deliberately perturbed so the suite must fail;
// exercising the failure path of the gate itself.
inline bool fault_injected() {
  return std::getenv("FRS_CHECK_INJECT_FAULT") != nullptr;
}

struct Collector {
  std::optional<std::string> first_failure;
  void require(bool ok, const std::string& msg) {
    if (!ok && !first_failure) first_failure = msg;
  }
  template <typename T>
  void require_le(T value, T bound, const std::string& what) {
    if (!(value <= bound) && !first_failure) {
      std::ostringstream os;
      os << what << ": " << value << " > " << bound;
      first_failure = os.str();
    }
  }
};

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline CheckResult group_eig(long long seed) {
  Collector c;
  Rng rng(seed);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 4;
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
    const SymMat s(m);
    const SpectralDecomp dec = eig(s);
    c.require_le((dec.reconstruct() - s.mat()).norm(),
                 1e-12 * std::max(1.0, s.norm()), "eig reconstruction");
    c.require_le((dec.eigenvectors.transpose() * dec.eigenvectors -
                  Eigen::MatrixXd::Identity(d, d))
                     .norm(),
                 1e-12, "eig orthogonality");
    for (int i = 0; i + 1 < d; ++i)
      c.require(dec.eigenvalues[i] <= dec.eigenvalues[i + 1],
                "eigenvalues not sorted");
  }
  return {"symmat.eig", !c.first_failure, c.first_failure.value_or("50 trials")};
}

inline CheckResult group_spectral(long long seed) {
  Collector c;
  Rng rng(seed);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 3;
    const SymMat a = random_spd(rng, d, 0.1, 4.0);
    const SymMat r = spectral_sqrt(a);
    c.require_le((r.mat() * r.mat() - a.mat()).norm(), 1e-10 * a.norm(),
                 "sqrt squared");
    const SymMat lg = spectral_fn(a, [](double x) { return std::log(x); },
                                  1e-14, FloorPolicy::strict);
    c.require_le((spectral_exp(lg).mat() - a.mat()).norm(), 1e-10 * a.norm(),
                 "exp(log) round trip");
  }
  bool threw = false;
  try {
    spectral_fn(SymMat::diagonal(Eigen::Vector2d(1.0, -1.0)),
                [](double x) { return std::sqrt(x); }, 1e-12,
                FloorPolicy::strict);
  } catch (const SingularMatrixError&) {
    threw = true;
  }
  c.require(threw, "strict floor policy did not reject a negative eigenvalue");
  return {"symmat.spectral", !c.first_failure, c.first_failure.value_or("50 trials")};
}

inline CheckResult group_lyapunov(long long seed) {
  Collector c;
  Rng rng(seed);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 4;  // d up to 5
    const SymMat a = random_spd(rng, d, 0.2, 3.0);
    Eigen::MatrixXd um(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) um(i, j) = rng.normal();
    const SymMat u(um);
    SymMat back = lyapunov_solve(a, riesz(a, u));
    if (fault_injected() && trial == 0) back += 1e-3 * SymMat::identity(d);
    c.require_le((back.mat() - u.mat()).norm(), 1e-8 * std::max(1.0, u.norm()),
                 "lyapunov round trip");
    const SymMat s = riesz(a, u);
    const SymMat resid =
        SymMat(a.mat() * back.mat() + back.mat() * a.mat() - 2.0 * s.mat());
    c.require_le(resid.norm(), 1e-10 * (1.0 + s.norm()), "lyapunov residual");
    // Self-adjointness of the Riesz map in the Frobenius pairing.
    Eigen::MatrixXd vm(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) vm(i, j) = rng.normal();
    const SymMat v(vm);
    c.require_le(std::abs(frobenius(riesz(a, u), v) - frobenius(riesz(a, v), u)),
                 1e-10 * (1.0 + u.norm() * v.norm()), "riesz self-adjointness");
  }
  return {"symmat.lyapunov", !c.first_failure,
          c.first_failure.value_or("1000 trials")};
}

inline CheckResult group_bures(long long seed) {
  Collector c;
  Rng rng(seed);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 3;  // d up to 4
    const SymMat a = random_spd(rng, d, 0.2, 4.0);
    const SymMat b = random_spd(rng, d, 0.2, 4.0);
    const SymMat e = random_spd(rng, d, 0.2, 4.0);
    const double dab = bures_sq(a, b);
    c.require_le(std::abs(dab - bures_sq(b, a)), 1e-10, "bures symmetry");
    const double scale = 1.0 + rng.uniform();
    c.require_le(std::abs(bures_sq(scale * a, scale * b) - scale * dab),
                 1e-10 * (1.0 + scale * dab), "bures scaling");
    const double tri = std::sqrt(bures_sq(a, e)) + std::sqrt(bures_sq(e, b));
    c.require(std::sqrt(dab) <= tri + 1e-8, "bures triangle inequality");
  }
  for (int trial = 0; trial < 50; ++trial) {
    const SymMat a = random_spd(rng, 3, 0.3, 3.0);
    Eigen::MatrixXd um(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) um(i, j) = rng.normal();
    SymMat u(um);
    u *= 1.0 / u.norm();
    c.require(metric(a, u, u) > 0.0, "metric positivity on unit potentials");
  }
  return {"bures.distance", !c.first_failure,
          c.first_failure.value_or("500 triples")};
}

inline CheckResult group_projection(long long seed) {
  Collector c;
  GridPtr grid = Grid::uniform(3, 2);
  const MatrixMeasure a = random_measure(grid, seed, 0.3, 3.0);
  Rng rng(seed + 1);
  std::vector<SymMat> raw;
  for (int k = 0; k < 3; ++k) raw.push_back(random_spd(rng, 2, 0.1, 2.0));
  const MatrixField u_raw(grid, raw);
  const MatrixField u = project_tangent(a.field(), u_raw);
  c.require_le(std::abs(trace_average(a.field(), u)), 1e-12, "zero average");
  const MatrixField u2 = project_tangent(a.field(), u);
  double diff = 0.0;
  for (std::size_t k = 0; k < 3; ++k) diff += (u2[k].mat() - u[k].mat()).norm();
  c.require_le(diff, 1e-12, "projection idempotence");
  // Fisher-Rao gradients are mass-neutral directions.
  const FunctionalValue ent = entropy(a.field(), true);
  c.require(ent.finite && ent.gradient.has_value(), "entropy gradient missing");
  if (ent.gradient) {
    std::vector<double> tr_terms(3);
    for (std::size_t k = 0; k < 3; ++k)
      tr_terms[k] = grid->weight(k) * (*ent.gradient)[k].trace();
    c.require_le(std::abs(pairwise_sum(tr_terms)), 1e-10, "gradient mass neutrality");
  }
  return {"frspace.projection", !c.first_failure, c.first_failure.value_or("ok")};
}

inline CheckResult group_functionals(long long seed) {
  Collector c;
  GridPtr grid = Grid::uniform(3, 2);
  const MatrixMeasure id = uniform_identity(grid);
  c.require_le(std::abs(entropy(id).value), 1e-14, "entropy at identity");
  c.require_le(std::abs(fisher_info(id).value), 1e-14, "fisher at identity");
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixMeasure a = random_measure(grid, seed + trial, 0.3, 3.0);
    const FunctionalValue ent = entropy(a, true);
    c.require(ent.value >= 0.0, "entropy negative");
    const FunctionalValue fish = fisher_info(a);
    c.require(fish.value >= 0.0, "fisher negative");
    // Reduced entropy form -1/2 tr integral log A agrees on unit mass.
    std::vector<double> logs(a.cells());
    for (std::size_t k = 0; k < a.cells(); ++k) {
      const SpectralDecomp d = eig(a[k]);
      double s = 0.0;
      for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
        s += std::log(d.eigenvalues[i]);
      logs[k] = grid->weight(k) * s;
    }
    const double reduced = -0.5 * pairwise_sum(logs);
    c.require_le(std::abs(ent.value - reduced), 1e-12 * (1.0 + std::abs(reduced)),
                 "entropy reduced-form agreement");
    // Fisher information equals the squared gradient norm.
    const MatrixField pot = grad_fr_potential(
        a.field(), [&] {
          std::vector<SymMat> fp;
          for (std::size_t k = 0; k < a.cells(); ++k)
            fp.push_back(spectral_fn(
                a[k], [](double x) { return 0.5 * (1.0 - 1.0 / x); }, 1e-14,
                FloorPolicy::strict));
          return MatrixField(a.grid(), std::move(fp));
        }());
    const double gnorm_sq = fr_norm_sq(a.field(), pot);
    c.require_le(rel_err(gnorm_sq, fish.value), 1e-8,
                 "fisher = squared gradient norm");
  }
  return {"frspace.functionals", !c.first_failure,
          c.first_failure.value_or("20 measures")};
}

inline CheckResult group_heat_flow(long long seed) {
  Collector c;
  GridPtr grid = Grid::uniform(2, 2);
  const MatrixMeasure a0 = random_measure(grid, seed, 0.4, 2.5);
  const MatrixMeasure id = uniform_identity(grid);
  // Fixed point and exact contraction rate.
  const MatrixMeasure id_t = heat_flow_exact(id, 3.0);
  double drift = 0.0;
  for (std::size_t k = 0; k < id.cells(); ++k)
    drift = std::max(drift, (id_t[k].mat() - id[k].mat()).norm());
  c.require_le(drift, 1e-14, "identity not stationary");
  const double t_probe = 1.7;
  const MatrixMeasure at = heat_flow_exact(a0, t_probe);
  for (std::size_t k = 0; k < a0.cells(); ++k) {
    const double lhs =
        (at[k].mat() - Eigen::MatrixXd::Identity(2, 2)).norm();
    const double rhs = std::exp(-0.5 * t_probe) *
                       (a0[k].mat() - Eigen::MatrixXd::Identity(2, 2)).norm();
    c.require_le(std::abs(lhs - rhs), 1e-12, "contraction rate");
  }
  // Integrator against the closed form.
  const double dt = 1e-3, t_end = 1.0;
  const FlowTrace trace = heat_flow_integrate(a0, t_end, dt);
  const MatrixMeasure exact = heat_flow_exact(a0, t_end);
  double err = 0.0;
  for (std::size_t k = 0; k < a0.cells(); ++k)
    err = std::max(err,
                   (trace.states.back()[k].mat() - exact[k].mat()).norm());
  c.require_le(err, 1e-8, "integrator error vs closed form");
  for (const MatrixMeasure& st : trace.states)
    c.require_le(std::abs(mass(st.field()) - 1.0), 1e-10, "mass drift");
  for (std::size_t i = 1; i < trace.fisher_series.size(); ++i)
    c.require(trace.fisher_series[i] <= trace.fisher_series[i - 1] + 1e-9,
              "fisher series not monotone");
  const std::vector<DissipationEntry> rep = dissipation_report(trace);
  double max_res = 0.0;
  for (const DissipationEntry& e : rep) max_res = std::max(max_res, e.residual);
  c.require_le(max_res, 1e-5, "dissipation residual");
  const FlowTrace trace2 = heat_flow_integrate(a0, t_end, 2.0 * dt);
  double max_res2 = 0.0;
  for (const DissipationEntry& e : dissipation_report(trace2))
    max_res2 = std::max(max_res2, e.residual);
  const double factor = max_res2 / max_res;
  c.require(factor >= 3.0 && factor <= 5.0,
            "dissipation residual not O(dt^2): factor " + std::to_string(factor));
  return {"dynamics.heat_flow", !c.first_failure, c.first_failure.value_or("ok")};
}

inline CheckResult group_action_gradient(long long seed) {
  Collector c;
  GridPtr grid = Grid::uniform(2, 2);
  Rng rng(seed);
  std::vector<MatrixField> knots;
  for (int j = 0; j < 4; ++j) {  // 2 interior knots
    std::vector<SymMat> blocks;
    for (int k = 0; k < 2; ++k) blocks.push_back(random_spd(rng, 2, 0.5, 2.0));
    knots.push_back(MatrixField(grid, std::move(blocks)));
  }
  const detail::ObjectiveEval ev =
      detail::eval_objective_with_gradient(*grid, knots, 0.0);
  c.require(ev.finite, "objective infinite on random PD path");
  const double h = 1e-5;
  for (std::size_t i = 1; i <= 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int a = 0; a < 2; ++a)
        for (int b = a; b < 2; ++b) {
          auto perturbed = [&](double delta) {
            std::vector<MatrixField> kk = knots;
            Eigen::MatrixXd m = kk[i][k].mat();
            m(a, b) += delta;
            m(b, a) = m(a, b);
            kk[i][k] = SymMat(m);
            return detail::eval_objective(*grid, kk, 0.0);
          };
          const double fd = (perturbed(h) - perturbed(-h)) / (2.0 * h);
          // Symmetric-entry derivative: off-diagonal entries move in pairs.
          const double an = ev.euclidean_grad[i - 1][k](a, b) * (a == b ? 1.0 : 2.0);
          c.require_le(std::abs(fd - an) / std::max(1.0, std::abs(an)), 1e-5,
                       "action gradient vs central differences");
        }
  return {"action.gradient", !c.first_failure, c.first_failure.value_or("ok")};
}

inline CheckResult group_action_symmetries(long long seed) {
  Collector c;
  GridPtr grid = Grid::uniform(2, 2);
  Rng rng(seed);
  std::vector<MatrixField> knots;
  for (int j = 0; j < 5; ++j) {
    std::vector<SymMat> blocks;
    for (int k = 0; k < 2; ++k) blocks.push_back(random_spd(rng, 2, 0.5, 2.0));
    knots.push_back(MatrixField(grid, std::move(blocks)));
  }
  const Path p(grid, knots, PathMode::unconstrained);
  const double fwd = path_action(p);
  const double bwd = path_action(reverse(p));
  c.require_le(std::abs(fwd - bwd), 1e-12 * std::max(1.0, fwd), "time reversal");
  for (double v : per_interval_action(p))
    c.require(v >= 0.0, "negative interval action");
  const Path constant(grid, std::vector<MatrixField>(3, knots[0]),
                      PathMode::unconstrained);
  c.require_le(path_action(constant), 1e-14, "constant path action");
  return {"action.symmetries", !c.first_failure, c.first_failure.value_or("ok")};
}

inline CheckResult group_solvers(long long seed) {
  Collector c;
  // Scalar two-cell geodesic against the closed-form great-circle value.
  GridPtr sgrid = Grid::uniform(2, 1);
  const double p0 = 0.8;
  auto scalar_measure = [&](double p) {
    std::vector<SymMat> blocks{
        SymMat::diagonal(Eigen::VectorXd::Constant(1, 2.0 * p)),
        SymMat::diagonal(Eigen::VectorXd::Constant(1, 2.0 * (1.0 - p)))};
    return MatrixMeasure(MatrixField(sgrid, std::move(blocks)));
  };
  SolverConfig cfg;
  cfg.n_steps = 16;
  const SolveReport geo =
      solve_geodesic(scalar_measure(p0), scalar_measure(1.0 - p0), cfg);
  c.require(geo.converged, "scalar geodesic did not converge");
  const double bc = std::sqrt(p0 * (1.0 - p0)) * 2.0;
  const double fr_sq = 4.0 * std::pow(std::acos(bc), 2);
  c.require_le(rel_err(geo.value, fr_sq), 1e-2, "scalar Fisher-Rao value");
  // Schrodinger dominates the geodesic.
  SolverConfig scfg = cfg;
  scfg.epsilon = 0.3;
  const SolveReport sch =
      solve_schrodinger(scalar_measure(p0), scalar_measure(1.0 - p0), scfg);
  c.require(sch.value >= geo.value - 1e-9, "schrodinger below geodesic");
  c.require_le(std::abs(sch.value - (sch.action_part +
                                     scfg.epsilon * scfg.epsilon * sch.fisher_part)),
               1e-12 * std::max(1.0, sch.value), "objective decomposition");
  // Single-matrix dynamic action against the Bures closed form.
  Rng rng(seed);
  const SymMat a0 = random_spd(rng, 2, 0.4, 3.0);
  const SymMat a1 = random_spd(rng, 2, 0.4, 3.0);
  const double dyn = bures_dynamic_sq(a0, a1, 16, SolverConfig{});
  c.require_le(rel_err(dyn / 4.0, bures_sq(a0, a1)), 1e-2,
               "dynamic vs static Bures");
  return {"action.solvers", !c.first_failure, c.first_failure.value_or("ok")};
}

inline CheckResult group_io(long long seed) {
  Collector c;
  GridPtr grid = Grid::normalized({0.2, 0.5, 0.3}, 2);
  const MatrixMeasure a = random_measure(grid, seed, 0.3, 3.0);
  const ojson j = to_json(a);
  const MatrixMeasure back = measure_from_json(ojson::parse(j.dump()));
  for (std::size_t k = 0; k < a.cells(); ++k)
    c.require(a[k].mat() == back[k].mat(), "measure round trip not exact");
  c.require(back.grid()->weights() == grid->weights(), "grid weights round trip");
  c.require(back.grid()->original_volume() == grid->original_volume(),
            "grid volume round trip");
  return {"cli.io_roundtrip", !c.first_failure, c.first_failure.value_or("ok")};
}

}  // namespace check_detail

/// Runs every invariant group, printing one pass/fail line per group.
/// Returns true iff all groups pass.
inline bool run_invariant_suite(std::ostream& os,
                                std::vector<CheckResult>* results = nullptr) {
  const long long seed = 20260101;
  using GroupFn = CheckResult (*)(long long);
  struct PlanEntry {
    const char* name;
    GroupFn fn;
  };
  const PlanEntry plan[] = {
      {"symmat.eig", check_detail::group_eig},
      {"symmat.spectral", check_detail::group_spectral},
      {"symmat.lyapunov", check_detail::group_lyapunov},
      {"bures.distance", check_detail::group_bures},
      {"frspace.projection", check_detail::group_projection},
      {"frspace.functionals", check_detail::group_functionals},
      {"dynamics.heat_flow", check_detail::group_heat_flow},
      {"action.gradient", check_detail::group_action_gradient},
      {"action.symmetries", check_detail::group_action_symmetries},
      {"action.solvers", check_detail::group_solvers},
      {"cli.io_roundtrip", check_detail::group_io},
  };
  std::vector<CheckResult> all;
  long long s = seed;
  for (const PlanEntry& entry : plan) {
    try {
      all.push_back(entry.fn(s));
    } catch (const std::exception& e) {
      all.push_back({entry.name, false,
                     std::string("unexpected exception: ") + e.what()});
    }
    ++s;
  }
  bool ok = true;
  for (const CheckResult& r : all) {
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.group;
    if (!r.pass) os << "  (" << r.detail << ")";
    os << '\n';
    ok = ok && r.pass;
  }
  if (results) *results = all;
  return ok;
}

}  // namespace frs

#endif  // FRS_CHECK_HPP
