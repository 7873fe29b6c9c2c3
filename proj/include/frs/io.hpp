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

#ifndef FRS_IO_HPP
#define FRS_IO_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "frs/grid.hpp"
#include "frs/heat_flow.hpp"
#include "frs/measure.hpp"
#include "frs/path.hpp"
#include "frs/solver.hpp"
#include "frs/symmat.hpp"

namespace frs {

// Key order is fixed (ordered_json) and doubles print in shortest
// round-trip form, so identical in-memory results serialize to identical
// bytes; result files carry no timestamps (those live in the metadata file).
using ojson = nlohmann::ordered_json;

/// Shortest round-trip decimal text for a double ("nan" for quiet holes in
/// CSV series).
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline ojson to_json(const SymMat& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < m.dim(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline SymMat symmat_from_json(const ojson& j) {
  if (!j.is_array() || j.empty())
    throw ValidationError("matrix: expected a non-empty array of rows");
  const int d = int(j.size());
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    const ojson& row = j.at(i);
    if (!row.is_array() || int(row.size()) != d)
      throw ValidationError("matrix: row " + std::to_string(i) +
                            " must have " + std::to_string(d) + " entries");
    for (int jj = 0; jj < d; ++jj) {
      const ojson& v = row.at(jj);
      if (!v.is_number())
        throw ValidationError("matrix: entry (" + std::to_string(i) + "," +
                              std::to_string(jj) + ") is not a number");
      m(i, jj) = v.get<double>();
    }
  }
  return SymMat(m);  // re-symmetrizes on load
}

inline ojson to_json(const Grid& g) {
  return ojson{{"cells", g.cells()},
               {"matrix_dim", g.matrix_dim()},
               {"weights", g.raw_weights()},
               {"original_volume", g.original_volume()},
               {"normalized", g.is_normalized()}};
}

inline GridPtr grid_from_json(const ojson& j) {
  if (!j.is_object()) throw ValidationError("grid: expected an object");
  const int d = j.at("matrix_dim").get<int>();
  std::vector<double> weights = j.at("weights").get<std::vector<double>>();
  const bool normalized = j.value("normalized", true);
  return normalized ? Grid::normalized(std::move(weights), d)
                    : Grid::unit(std::move(weights), d);
}

inline ojson to_json(const MatrixField& f) {
  ojson blocks = ojson::array();
  for (std::size_t k = 0; k < f.cells(); ++k) blocks.push_back(to_json(f[k]));
  return ojson{{"grid", to_json(*f.grid())}, {"blocks", std::move(blocks)}};
}

inline MatrixField field_from_json(const ojson& j) {
  GridPtr grid = grid_from_json(j.at("grid"));
  const ojson& bj = j.at("blocks");
  if (!bj.is_array() || bj.size() != grid->cells())
    throw ValidationError("field: blocks must match the grid cell count");
  std::vector<SymMat> blocks;
  blocks.reserve(bj.size());
  for (const ojson& b : bj) blocks.push_back(symmat_from_json(b));
  return MatrixField(std::move(grid), std::move(blocks));
}

inline ojson to_json(const MatrixMeasure& m) { return to_json(m.field()); }

inline MatrixMeasure measure_from_json(const ojson& j) {
  return MatrixMeasure(field_from_json(j));
}

inline ojson to_json(const SolverDiagnostics& d) {
  return ojson{{"max_mass_drift", d.max_mass_drift},
               {"min_eigenvalue", d.min_eigenvalue},
               {"max_tangent_average", d.max_tangent_average},
               {"line_search_failures", d.line_search_failures}};
}

inline ojson to_json(const Path& p) {
  ojson knots = ojson::array();
  for (std::size_t j = 0; j <= p.n_intervals(); ++j) {
    ojson blocks = ojson::array();
    for (std::size_t k = 0; k < p.knot(j).cells(); ++k)
      blocks.push_back(to_json(p.knot(j)[k]));
    knots.push_back(ojson{{"t", p.time(j)}, {"blocks", std::move(blocks)}});
  }
  return ojson{
      {"mode", p.mode() == PathMode::constrained ? "constrained" : "unconstrained"},
      {"grid", to_json(*p.grid())},
      {"knots", std::move(knots)}};
}

inline ojson to_json(const SolveReport& r, bool with_path = true) {
  ojson j{{"value", r.value},
          {"action_part", r.action_part},
          {"fisher_part", r.fisher_part},
          {"epsilon", r.epsilon},
          {"iterations", r.iterations},
          {"final_grad_norm", r.final_grad_norm},
          {"converged", r.converged},
          {"diagnostics", to_json(r.diagnostics)}};
  if (with_path) j["path"] = to_json(r.path);
  return j;
}

inline ojson to_json(const GammaSweepResult& gs) {
  ojson rows = ojson::array();
  for (const GammaRow& row : gs.rows)
    rows.push_back(
        ojson{{"epsilon", row.epsilon}, {"value", row.value}, {"gap", row.gap}});
  return ojson{{"geodesic_value", gs.geodesic_value},
               {"geodesic_report", to_json(gs.geodesic_report, false)},
               {"rows", std::move(rows)}};
}

/// heatflow series: columns (t, entropy, fisher, dissipation_residual), with
/// "nan" at the two endpoints where the central difference is undefined.
inline void write_heatflow_csv(std::ostream& os, const FlowTrace& trace,
                               const std::vector<DissipationEntry>& residuals) {
  os << "t,entropy,fisher,dissipation_residual\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    double res = std::nan("");
    if (i >= 1 && i - 1 < residuals.size()) res = residuals[i - 1].residual;
    os << format_double(trace.times[i]) << ',' << format_double(trace.entropy_series[i])
       << ',' << format_double(trace.fisher_series[i]) << ',' << format_double(res)
       << '\n';
  }
}

/// path knots: one row per (time, cell) with row-major entries and the
/// block's smallest eigenvalue.
inline void write_path_csv(std::ostream& os, const Path& p) {
  const int d = p.grid()->matrix_dim();
  os << "t,cell_id";
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) os << ",m" << i << j;
  os << ",lambda_min\n";
  for (std::size_t j = 0; j <= p.n_intervals(); ++j)
    for (std::size_t k = 0; k < p.knot(j).cells(); ++k) {
      const SymMat& block = p.knot(j)[k];
      os << format_double(p.time(j)) << ',' << k;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) os << ',' << format_double(block(a, b));
      os << ',' << format_double(eig(block).eigenvalues[0]) << '\n';
    }
}

inline void write_json_file(const std::string& path, const ojson& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open for writing: " + path);
  os << j.dump(2) << '\n';
  if (!os) throw ValidationError("write failed: " + path);
}

inline ojson read_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open: " + path);
  try {
    return ojson::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("parse error in ") + path + ": " + e.what());
  }
}

}  // namespace frs

#endif  // FRS_IO_HPP
