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

#ifndef FRS_CLI_HPP
#define FRS_CLI_HPP

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "frs/check.hpp"
#include "frs/heat_flow.hpp"
#include "frs/io.hpp"
#include "frs/random.hpp"
#include "frs/solver.hpp"

namespace frs {

inline constexpr const char kVersion[] = "0.1.0";

/// Options supplied on the command line rather than in the manifest.
struct RunOptions {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  bool verbose = false;
};

namespace cli_detail {

inline const ojson* find(const ojson& j, const std::string& key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline const ojson& need(const ojson& j, const std::string& key,
                         const std::string& where) {
  const ojson* p = find(j, key);
  if (p == nullptr)
    throw ValidationError("manifest: missing field '" + where + "'");
  return *p;
}

inline double need_number(const ojson& j, const std::string& key,
                          const std::string& where) {
  const ojson& v = need(j, key, where);
  if (!v.is_number())
    throw ValidationError("manifest: field '" + where + "' must be a number");
  return v.get<double>();
}

inline long long need_integer(const ojson& j, const std::string& key,
                              const std::string& where) {
  const ojson& v = need(j, key, where);
  if (!v.is_number_integer())
    throw ValidationError("manifest: field '" + where + "' must be an integer");
  return v.get<long long>();
}

inline std::string need_string(const ojson& j, const std::string& key,
                               const std::string& where) {
  const ojson& v = need(j, key, where);
  if (!v.is_string())
    throw ValidationError("manifest: field '" + where + "' must be a string");
  return v.get<std::string>();
}

inline SymMat parse_matrix(const ojson& j, const std::string& where) {
  try {
    return symmat_from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError("manifest: field '" + where + "': " + e.what());
  }
}

inline Eigen::VectorXd parse_vector(const ojson& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ValidationError("manifest: field '" + where +
                          "' must be a non-empty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ValidationError("manifest: field '" + where +
                            "' must contain only numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline GridPtr parse_grid(const ojson& manifest) {
  const ojson& j = need(manifest, "grid", "grid");
  if (!j.is_object())
    throw ValidationError("manifest: field 'grid' must be an object");
  const long long dim = need_integer(j, "matrix_dim", "grid.matrix_dim");
  if (dim < 1)
    throw ValidationError("manifest: field 'grid.matrix_dim' must be >= 1");
  bool normalized = true;
  if (const ojson* p = find(j, "normalized")) {
    if (!p->is_boolean())
      throw ValidationError("manifest: field 'grid.normalized' must be a boolean");
    normalized = p->get<bool>();
  }
  std::vector<double> weights;
  const ojson& wj = need(j, "weights", "grid.weights");
  if (wj.is_string()) {
    if (wj.get<std::string>() != "uniform")
      throw ValidationError(
          "manifest: field 'grid.weights' must be \"uniform\" or an array");
    const long long cells = need_integer(j, "cells", "grid.cells");
    if (cells < 1)
      throw ValidationError("manifest: field 'grid.cells' must be >= 1");
    weights.assign(static_cast<std::size_t>(cells), 1.0);
  } else if (wj.is_array()) {
    for (const ojson& w : wj) {
      if (!w.is_number())
        throw ValidationError(
            "manifest: field 'grid.weights' must contain only numbers");
      weights.push_back(w.get<double>());
    }
    if (const ojson* p = find(j, "cells")) {
      if (!p->is_number_integer() ||
          p->get<long long>() != static_cast<long long>(weights.size()))
        throw ValidationError(
            "manifest: field 'grid.cells' disagrees with the weight count");
    }
  } else {
    throw ValidationError(
        "manifest: field 'grid.weights' must be \"uniform\" or an array");
  }
  return normalized ? Grid::normalized(weights, static_cast<int>(dim))
                    : Grid::unit(weights, static_cast<int>(dim));
}

inline SolverConfig parse_solver(const ojson& manifest) {
  SolverConfig cfg;
  const ojson* s = find(manifest, "solver");
  if (s == nullptr) return cfg;
  if (!s->is_object())
    throw ValidationError("manifest: field 'solver' must be an object");
  static const std::set<std::string> known = {
      "n_steps",  "max_iter", "grad_tol",     "eig_floor",
      "step_init", "epsilon",  "lbfgs_memory", "seed"};
  for (const auto& item : s->items())
    if (known.find(item.key()) == known.end())
      throw ValidationError("manifest: unknown solver field '" + item.key() +
                            "'");
  if (find(*s, "n_steps"))
    cfg.n_steps = static_cast<int>(need_integer(*s, "n_steps", "solver.n_steps"));
  if (find(*s, "max_iter"))
    cfg.max_iter =
        static_cast<int>(need_integer(*s, "max_iter", "solver.max_iter"));
  if (find(*s, "grad_tol"))
    cfg.grad_tol = need_number(*s, "grad_tol", "solver.grad_tol");
  if (find(*s, "eig_floor"))
    cfg.eig_floor = need_number(*s, "eig_floor", "solver.eig_floor");
  if (find(*s, "step_init"))
    cfg.step_init = need_number(*s, "step_init", "solver.step_init");
  if (find(*s, "epsilon"))
    cfg.epsilon = need_number(*s, "epsilon", "solver.epsilon");
  if (find(*s, "lbfgs_memory"))
    cfg.lbfgs_memory = static_cast<int>(
        need_integer(*s, "lbfgs_memory", "solver.lbfgs_memory"));
  if (find(*s, "seed")) cfg.seed = need_integer(*s, "seed", "solver.seed");
  return cfg;
}

struct GeneratorSpec {
  long long seed = 0;
  double lo = 0.2;
  double hi = 5.0;
};

inline GeneratorSpec parse_generator(const ojson& j, const std::string& where) {
  GeneratorSpec g;
  g.seed = need_integer(j, "seed", where + ".seed");
  if (const ojson* r = find(j, "eig_range")) {
    if (!r->is_array() || r->size() != 2 || !(*r)[0].is_number() ||
        !(*r)[1].is_number())
      throw ValidationError("manifest: field '" + where +
                            ".eig_range' must be [lo, hi]");
    g.lo = (*r)[0].get<double>();
    g.hi = (*r)[1].get<double>();
    if (!(g.lo > 0.0) || !(g.hi >= g.lo))
      throw ValidationError("manifest: field '" + where +
                            ".eig_range' must satisfy 0 < lo <= hi");
  }
  return g;
}

inline MatrixField parse_field(const ojson& j, GridPtr grid,
                               const std::string& where) {
  if (!j.is_array())
    throw ValidationError("manifest: field '" + where +
                          "' must be an array of matrices");
  if (j.size() != grid->cells())
    throw ValidationError("manifest: field '" + where + "' has " +
                          std::to_string(j.size()) + " blocks, grid has " +
                          std::to_string(grid->cells()) + " cells");
  std::vector<SymMat> blocks;
  blocks.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k)
    blocks.push_back(parse_matrix(j[k], where + "[" + std::to_string(k) + "]"));
  return MatrixField(std::move(grid), std::move(blocks));
}

inline MatrixField random_field(GridPtr grid, long long seed, double lo,
                                double hi) {
  Rng rng(seed);
  std::vector<SymMat> blocks;
  blocks.reserve(grid->cells());
  const int d = grid->matrix_dim();
  for (std::size_t k = 0; k < grid->cells(); ++k)
    blocks.push_back(random_spd(rng, d, lo, hi));
  return MatrixField(std::move(grid), std::move(blocks));
}

inline std::pair<MatrixMeasure, MatrixMeasure> parse_measure_endpoints(
    const ojson& manifest, GridPtr grid) {
  const ojson& ep = need(manifest, "endpoints", "endpoints");
  if (const ojson* gen = find(ep, "generator")) {
    const GeneratorSpec g = parse_generator(*gen, "endpoints.generator");
    return generate_endpoints(grid, g.seed, g.lo, g.hi);
  }
  MatrixField f0 = parse_field(need(ep, "a0", "endpoints.a0"), grid,
                               "endpoints.a0");
  MatrixField f1 = parse_field(need(ep, "a1", "endpoints.a1"), grid,
                               "endpoints.a1");
  try {
    return {MatrixMeasure(std::move(f0)), MatrixMeasure(std::move(f1))};
  } catch (const std::exception& e) {
    throw ValidationError(std::string("manifest: invalid endpoint measure: ") +
                          e.what());
  }
}

inline std::pair<MatrixField, MatrixField> parse_field_endpoints(
    const ojson& manifest, GridPtr grid) {
  const ojson& ep = need(manifest, "endpoints", "endpoints");
  if (const ojson* gen = find(ep, "generator")) {
    const GeneratorSpec g = parse_generator(*gen, "endpoints.generator");
    return {random_field(grid, g.seed, g.lo, g.hi),
            random_field(grid, g.seed + 0x9e3779b9LL, g.lo, g.hi)};
  }
  return {parse_field(need(ep, "a0", "endpoints.a0"), grid, "endpoints.a0"),
          parse_field(need(ep, "a1", "endpoints.a1"), grid, "endpoints.a1")};
}

struct OutputNames {
  std::string result = "result.json";
  std::string metadata = "metadata.json";
  std::string series = "heatflow.csv";
  std::string path = "path.csv";
  std::string sweep = "gamma.csv";
};

inline OutputNames parse_output_names(const ojson& manifest) {
  OutputNames names;
  const ojson* out = find(manifest, "output");
  if (out == nullptr) return names;
  if (!out->is_object())
    throw ValidationError("manifest: field 'output' must be an object");
  auto take = [&](const char* key, std::string& slot) {
    if (const ojson* p = find(*out, key)) {
      if (!p->is_string())
        throw ValidationError(std::string("manifest: field 'output.") + key +
                              "' must be a string");
      slot = p->get<std::string>();
    }
  };
  take("result", names.result);
  take("metadata", names.metadata);
  take("series", names.series);
  take("path", names.path);
  take("sweep", names.sweep);
  return names;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw ValidationError("failed writing '" + path.string() + "'");
}

inline std::string iso_utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline ojson run_bures(const ojson& manifest) {
  const SymMat a0 = parse_matrix(need(manifest, "a0", "a0"), "a0");
  const SymMat a1 = parse_matrix(need(manifest, "a1", "a1"), "a1");
  const double d2 = bures_sq(a0, a1);
  ojson result;
  result["command"] = "bures";
  result["matrix_dim"] = a0.dim();
  result["bures_sq"] = d2;
  result["bures"] = std::sqrt(d2);
  result["trace_a0"] = a0.trace();
  result["trace_a1"] = a1.trace();
  return result;
}

inline ojson run_w2_gaussian(const ojson& manifest) {
  const GaussianParams g0(
      parse_vector(need(manifest, "mean0", "mean0"), "mean0"),
      parse_matrix(need(manifest, "cov0", "cov0"), "cov0"));
  const GaussianParams g1(
      parse_vector(need(manifest, "mean1", "mean1"), "mean1"),
      parse_matrix(need(manifest, "cov1", "cov1"), "cov1"));
  const double w2 = gaussian_w2_sq(g0, g1);
  const double mean_sq = (g1.mean - g0.mean).squaredNorm();
  ojson result;
  result["command"] = "w2-gaussian";
  result["dim"] = g0.mean.size();
  result["w2_sq"] = w2;
  result["w2"] = std::sqrt(std::max(0.0, w2));
  result["mean_sq"] = mean_sq;
  result["bures_sq"] = w2 - mean_sq;
  return result;
}

inline ojson run_heatflow(const ojson& manifest, const RunOptions& opts,
                          const OutputNames& names) {
  GridPtr grid = parse_grid(manifest);
  const ojson& init = need(manifest, "initial", "initial");
  std::optional<MatrixMeasure> a0;
  if (init.is_object()) {
    const GeneratorSpec g =
        parse_generator(need(init, "generator", "initial.generator"),
                        "initial.generator");
    a0.emplace(random_measure(grid, g.seed, g.lo, g.hi));
  } else {
    try {
      a0.emplace(parse_field(init, grid, "initial"));
    } catch (const DomainError& e) {
      throw ValidationError(std::string("manifest: invalid initial measure: ") +
                            e.what());
    }
  }
  const double t_end = need_number(manifest, "t_end", "t_end");
  const double dt = need_number(manifest, "dt", "dt");
  const FlowTrace trace = heat_flow_integrate(*a0, t_end, dt);
  const std::vector<DissipationEntry> residuals = dissipation_report(trace);
  const MatrixMeasure exact = heat_flow_exact(*a0, t_end);
  double exact_err = 0.0;
  for (std::size_t k = 0; k < a0->cells(); ++k)
    exact_err = std::max(
        exact_err, (trace.states.back()[k].mat() - exact[k].mat()).norm());
  double mass_drift = 0.0;
  for (const MatrixMeasure& st : trace.states)
    mass_drift = std::max(mass_drift, std::abs(mass(st.field()) - 1.0));
  double max_residual = 0.0;
  for (const DissipationEntry& e : residuals)
    max_residual = std::max(max_residual, e.residual);

  std::ostringstream csv;
  write_heatflow_csv(csv, trace, residuals);
  write_text_file(opts.out_dir / names.series, csv.str());

  ojson result;
  result["command"] = "heatflow";
  result["t_end"] = t_end;
  result["dt"] = dt;
  result["steps"] = trace.times.size() - 1;
  result["entropy_initial"] = trace.entropy_series.front();
  result["entropy_final"] = trace.entropy_series.back();
  result["fisher_initial"] = trace.fisher_series.front();
  result["fisher_final"] = trace.fisher_series.back();
  result["max_error_vs_exact"] = exact_err;
  result["max_mass_drift"] = mass_drift;
  result["max_dissipation_residual"] = max_residual;
  result["final_state"] = to_json(trace.states.back());
  return result;
}

inline ojson report_result(const char* command, const SolveReport& report) {
  ojson result;
  result["command"] = command;
  result["report"] = to_json(report, true);
  return result;
}

inline ojson run_geodesic(const ojson& manifest, const RunOptions& opts,
                          const OutputNames& names, bool* converged) {
  GridPtr grid = parse_grid(manifest);
  const SolverConfig cfg = parse_solver(manifest);
  std::string mode = "constrained";
  if (const ojson* m = find(manifest, "mode")) {
    if (!m->is_string())
      throw ValidationError("manifest: field 'mode' must be a string");
    mode = m->get<std::string>();
  }
  std::optional<SolveReport> report;
  if (mode == "constrained") {
    auto [a0, a1] = parse_measure_endpoints(manifest, grid);
    report.emplace(solve_geodesic(a0, a1, cfg));
  } else if (mode == "unconstrained") {
    auto [f0, f1] = parse_field_endpoints(manifest, grid);
    report.emplace(solve_hellinger(f0, f1, cfg));
  } else {
    throw ValidationError(
        "manifest: field 'mode' must be \"constrained\" or \"unconstrained\"");
  }
  std::ostringstream csv;
  write_path_csv(csv, report->path);
  write_text_file(opts.out_dir / names.path, csv.str());
  *converged = report->converged;
  ojson result = report_result("geodesic", *report);
  result["mode"] = mode;
  return result;
}

inline ojson run_schrodinger(const ojson& manifest, const RunOptions& opts,
                             const OutputNames& names, bool* converged) {
  GridPtr grid = parse_grid(manifest);
  SolverConfig cfg = parse_solver(manifest);
  if (const ojson* e = find(manifest, "epsilon")) {
    if (!e->is_number())
      throw ValidationError("manifest: field 'epsilon' must be a number");
    cfg.epsilon = e->get<double>();
  }
  auto [a0, a1] = parse_measure_endpoints(manifest, grid);
  const SolveReport report = solve_schrodinger(a0, a1, cfg);
  std::ostringstream csv;
  write_path_csv(csv, report.path);
  write_text_file(opts.out_dir / names.path, csv.str());
  *converged = report.converged;
  return report_result("schrodinger", report);
}

inline ojson run_gamma_sweep(const ojson& manifest, const RunOptions& opts,
                             const OutputNames& names, bool* converged) {
  GridPtr grid = parse_grid(manifest);
  const SolverConfig cfg = parse_solver(manifest);
  const ojson& ej = need(manifest, "epsilon_list", "epsilon_list");
  if (!ej.is_array() || ej.empty())
    throw ValidationError(
        "manifest: field 'epsilon_list' must be a non-empty array");
  std::vector<double> eps;
  for (const ojson& e : ej) {
    if (!e.is_number())
      throw ValidationError(
          "manifest: field 'epsilon_list' must contain only numbers");
    eps.push_back(e.get<double>());
  }
  auto [a0, a1] = parse_measure_endpoints(manifest, grid);
  const GammaSweepResult sweep = gamma_sweep(a0, a1, eps, cfg);
  *converged = sweep.geodesic_report.converged;
  for (const SolveReport& r : sweep.reports) *converged = *converged && r.converged;

  std::ostringstream csv;
  csv << "epsilon,value,gap\n";
  for (const GammaRow& row : sweep.rows)
    csv << format_double(row.epsilon) << ',' << format_double(row.value) << ','
        << format_double(row.gap) << '\n';
  write_text_file(opts.out_dir / names.sweep, csv.str());

  ojson result;
  result["command"] = "gamma-sweep";
  result["sweep"] = to_json(sweep);
  return result;
}

inline ojson run_check(std::ostream& out, bool* pass) {
  std::vector<CheckResult> groups;
  *pass = run_invariant_suite(out, &groups);
  ojson result;
  result["command"] = "check";
  result["pass"] = *pass;
  ojson arr = ojson::array();
  for (const CheckResult& g : groups) {
    ojson row;
    row["group"] = g.group;
    row["pass"] = g.pass;
    row["detail"] = g.detail;
    arr.push_back(std::move(row));
  }
  result["groups"] = std::move(arr);
  return result;
}

}  // namespace cli_detail

/// Executes a parsed manifest. `expected_command` is the CLI subcommand used
/// to invoke the tool; it must match the manifest's own command field.
/// Returns the process exit code for outcomes that are not reported by
/// exception (0 on success, 4 when the invariant suite fails). Throws
/// ValidationError for malformed input, ConvergenceError when an optimizer
/// fails to meet its tolerance, and other exceptions for internal errors.
inline int run_manifest(const ojson& manifest,
                        const std::string& expected_command,
                        const RunOptions& opts, std::ostream& out,
                        std::ostream& log) {
  namespace cd = cli_detail;
  if (!manifest.is_object())
    throw ValidationError("manifest: top level must be a JSON object");
  const ojson& ver = cd::need(manifest, "version", "version");
  const bool version_ok =
      (ver.is_string() && ver.get<std::string>() == "1") ||
      (ver.is_number_integer() && ver.get<long long>() == 1);
  if (!version_ok)
    throw ValidationError("manifest: field 'version' must be \"1\"");
  const std::string command = cd::need_string(manifest, "command", "command");
  static const std::set<std::string> commands = {
      "bures",       "w2-gaussian", "heatflow", "geodesic",
      "schrodinger", "gamma-sweep", "check"};
  if (commands.find(command) == commands.end())
    throw ValidationError("manifest: unknown command '" + command + "'");
  if (!expected_command.empty() && command != expected_command)
    throw ValidationError("manifest: command '" + command +
                          "' does not match the invoked subcommand '" +
                          expected_command + "'");
  if (opts.threads < 1) throw ValidationError("--threads must be >= 1");
  Eigen::setNbThreads(opts.threads);

  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec)
    throw ValidationError("cannot create output directory '" +
                          opts.out_dir.string() + "': " + ec.message());
  const cd::OutputNames names = cd::parse_output_names(manifest);

  const auto t0 = std::chrono::steady_clock::now();
  if (opts.verbose) log << "frs: running '" << command << "'\n";

  int code = 0;
  bool converged = true;
  ojson result;
  if (command == "bures") {
    result = cd::run_bures(manifest);
  } else if (command == "w2-gaussian") {
    result = cd::run_w2_gaussian(manifest);
  } else if (command == "heatflow") {
    result = cd::run_heatflow(manifest, opts, names);
  } else if (command == "geodesic") {
    result = cd::run_geodesic(manifest, opts, names, &converged);
  } else if (command == "schrodinger") {
    result = cd::run_schrodinger(manifest, opts, names, &converged);
  } else if (command == "gamma-sweep") {
    result = cd::run_gamma_sweep(manifest, opts, names, &converged);
  } else {
    bool pass = true;
    result = cd::run_check(out, &pass);
    if (!pass) code = 4;
  }

  write_json_file((opts.out_dir / names.result).string(), result);
  const auto t1 = std::chrono::steady_clock::now();

  ojson meta;
  meta["generated_at"] = cd::iso_utc_now();
  meta["elapsed_seconds"] =
      std::chrono::duration<double>(t1 - t0).count();
  meta["threads"] = opts.threads;
  meta["command"] = command;
  meta["library_version"] = kVersion;
  write_json_file((opts.out_dir / names.metadata).string(), meta);

  if (opts.verbose)
    log << "frs: wrote " << (opts.out_dir / names.result).string() << '\n';
  if (!converged)
    throw ConvergenceError("optimizer did not reach the gradient tolerance",
                           std::nan(""));
  return code;
}

/// Reads the manifest file, then delegates to run_manifest.
inline int run_manifest_file(const std::string& manifest_path,
                             const std::string& expected_command,
                             const RunOptions& opts, std::ostream& out,
                             std::ostream& log) {
  return run_manifest(read_json_file(manifest_path), expected_command, opts,
                      out, log);
}

}  // namespace frs

#endif  // FRS_CLI_HPP
