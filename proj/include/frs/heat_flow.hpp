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

#ifndef FRS_HEAT_FLOW_HPP
#define FRS_HEAT_FLOW_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "frs/common.hpp"
#include "frs/functionals.hpp"
#include "frs/measure.hpp"

namespace frs {

/// Trajectory of the heat flow dA/dt = (Id - A)/2 sampled at uniform times,
/// with entropy and Fisher information recorded along the way.
struct FlowTrace {
  std::vector<double> times;
  std::vector<MatrixMeasure> states;
  std::vector<double> entropy_series;
  std::vector<double> fisher_series;
};

/// Exact heat-flow solution per cell: A_t = Id + e^{-t/2} (A_0 - Id).
/// Preserves mass exactly and contracts toward the identity measure.
inline MatrixMeasure heat_flow_exact(const MatrixMeasure& a0, double t) {
  if (t < 0.0) throw DomainError("heat_flow_exact: negative time");
  const double decay = std::exp(-0.5 * t);
  const int d = a0.matrix_dim();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  std::vector<SymMat> blocks;
  blocks.reserve(a0.cells());
  for (std::size_t k = 0; k < a0.cells(); ++k)
    blocks.push_back(SymMat(id + decay * (a0[k].mat() - id)));
  return MatrixMeasure(MatrixField(a0.grid(), std::move(blocks)));
}

namespace detail {

// One classical fourth-order Runge-Kutta step for the per-cell ODE
// dA/dt = rhs(A); rhs maps fields to fields.
template <typename Rhs>
MatrixField rk4_step(const MatrixField& a, double dt, Rhs&& rhs) {
  MatrixField k1 = rhs(a);
  MatrixField k2 = rhs(a + (0.5 * dt) * k1);
  MatrixField k3 = rhs(a + (0.5 * dt) * k2);
  MatrixField k4 = rhs(a + dt * k3);
  MatrixField incr = k1 + 2.0 * k2 + 2.0 * k3 + k4;
  return a + (dt / 6.0) * incr;
}

}  // namespace detail

/// Integrates the heat flow with classical RK4 from t = 0 to t_end in steps
/// of dt (t_end must be a whole number of steps). The integrated states are
/// validated as measures, and the entropy series is required to be
/// nonincreasing up to a 1e-9 slack.
inline FlowTrace heat_flow_integrate(const MatrixMeasure& a0, double t_end,
                                     double dt) {
  if (!(dt > 0.0)) throw DomainError("heat_flow_integrate: dt must be positive");
  if (t_end < 0.0) throw DomainError("heat_flow_integrate: negative t_end");
  const long long n = std::llround(t_end / dt);
  if (std::abs(double(n) * dt - t_end) > 1e-9 * std::max(1.0, t_end))
    throw DomainError("heat_flow_integrate: t_end is not a multiple of dt");

  const int d = a0.matrix_dim();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  auto rhs = [&](const MatrixField& a) {
    std::vector<SymMat> blocks;
    blocks.reserve(a.cells());
    for (std::size_t k = 0; k < a.cells(); ++k)
      blocks.push_back(SymMat(0.5 * (id - a[k].mat())));
    return MatrixField(a.grid(), std::move(blocks));
  };

  FlowTrace trace;
  trace.times.reserve(n + 1);
  trace.states.reserve(n + 1);
  trace.entropy_series.reserve(n + 1);
  trace.fisher_series.reserve(n + 1);

  MatrixField state = a0.field();
  for (long long step = 0; step <= n; ++step) {
    if (step > 0) state = detail::rk4_step(state, dt, rhs);
    MatrixMeasure snapshot{MatrixField(state)};  // validates PSD and mass
    const FunctionalValue ent = entropy(snapshot);
    const FunctionalValue fish = fisher_info(snapshot);
    if (!ent.finite || !fish.finite)
      throw NumericError("heat_flow_integrate: state reached the PSD boundary");
    if (!trace.entropy_series.empty() &&
        ent.value > trace.entropy_series.back() + 1e-9)
      throw NumericError("heat_flow_integrate: entropy increased along the flow");
    trace.times.push_back(double(step) * dt);
    trace.states.push_back(std::move(snapshot));
    trace.entropy_series.push_back(ent.value);
    trace.fisher_series.push_back(fish.value);
  }
  return trace;
}

/// Residuals |dE/dt + F| of the entropy dissipation identity along a trace,
/// with central differences at interior times. The identity is exact for the
/// flow, so the residual is pure differencing error, O(dt^2).
struct DissipationEntry {
  double time;
  double residual;
};

inline std::vector<DissipationEntry> dissipation_report(const FlowTrace& trace) {
  const std::size_t n = trace.times.size();
  if (n < 3)
    throw DomainError("dissipation_report: need at least 3 states");
  const double dt = trace.times[1] - trace.times[0];
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::abs((trace.times[i + 1] - trace.times[i]) - dt) > 1e-12 * std::max(1.0, dt))
      throw DomainError("dissipation_report: non-uniform time grid");
  std::vector<DissipationEntry> out;
  out.reserve(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dEdt =
        (trace.entropy_series[i + 1] - trace.entropy_series[i - 1]) / (2.0 * dt);
    out.push_back({trace.times[i], std::abs(dEdt + trace.fisher_series[i])});
  }
  return out;
}

}  // namespace frs

#endif  // FRS_HEAT_FLOW_HPP
