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

#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "frs/cli.hpp"
#include "frs/io.hpp"
#include "frs/random.hpp"

using namespace frs;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("frs_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FRS_CLI_PATH) + " " + args +
                          " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("format_double round-trips through parsing") {
  for (double x : {1.0 / 3.0, 0.1, 1e-300, 123456.789, -2.5e17, 0.0}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("matrix json round trip is exact") {
  Rng rng(900);
  const SymMat a = random_spd(rng, 3, 0.3, 3.0);
  const ojson j = to_json(a);
  const SymMat back = symmat_from_json(ojson::parse(j.dump()));
  CHECK(back.mat() == a.mat());
}

TEST_CASE("matrix json parsing validates shape") {
  CHECK_THROWS_AS(symmat_from_json(ojson::parse("[[1,2],[3]]")),
                  ValidationError);
  CHECK_THROWS_AS(symmat_from_json(ojson::parse("[[1,\"x\"],[2,3]]")),
                  ValidationError);
  CHECK_THROWS_AS(symmat_from_json(ojson::parse("5")), ValidationError);
}

TEST_CASE("grid json carries raw weights and the original volume") {
  GridPtr g = Grid::normalized({0.2, 0.5, 0.3}, 2, {{0.0}, {0.5}, {1.0}});
  const ojson j = to_json(*g);
  CHECK(j["weights"].size() == 3);
  CHECK(j["weights"][1].get<double>() == 0.5);
  CHECK(j["original_volume"].get<double>() == g->original_volume());
  const GridPtr back = grid_from_json(j);
  CHECK(same_grid(*back, *g));
  CHECK(back->weights() == g->weights());
}

TEST_CASE("measure and path json round trips") {
  GridPtr g = Grid::uniform(2, 2);
  const MatrixMeasure a = random_measure(g, 901, 0.3, 3.0);
  const MatrixMeasure back = measure_from_json(to_json(a));
  for (std::size_t k = 0; k < a.cells(); ++k)
    CHECK(back[k].mat() == a[k].mat());

  const auto [a0, a1] = generate_endpoints(g, 902, 0.3, 3.0);
  SolverConfig cfg;
  cfg.n_steps = 8;
  const SolveReport r = solve_geodesic(a0, a1, cfg);
  const ojson pj = to_json(r.path);
  CHECK(pj["knots"].size() == 9);
  CHECK(pj["mode"] == "constrained");
}

TEST_CASE("json files survive a write and read cycle") {
  const fs::path dir = temp_dir("json");
  ojson j;
  j["x"] = 0.1 + 0.2;
  j["s"] = "text";
  write_json_file((dir / "t.json").string(), j);
  const ojson back = read_json_file((dir / "t.json").string());
  CHECK(back["x"].get<double>() == j["x"].get<double>());
  CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()),
                  ValidationError);
  write_file(dir / "bad.json", "{not json");
  CHECK_THROWS_AS(read_json_file((dir / "bad.json").string()),
                  ValidationError);
}

TEST_CASE("heatflow csv has the fixed column layout") {
  GridPtr g = Grid::uniform(1, 2);
  const MatrixMeasure a0 = random_measure(g, 903, 0.5, 2.0);
  const FlowTrace trace = heat_flow_integrate(a0, 0.3, 0.1);
  std::ostringstream os;
  write_heatflow_csv(os, trace, dissipation_report(trace));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,entropy,fisher,dissipation_residual");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("path csv has one row per knot and cell") {
  GridPtr g = Grid::uniform(2, 2);
  const auto [a0, a1] = generate_endpoints(g, 904, 0.3, 3.0);
  SolverConfig cfg;
  cfg.n_steps = 4;
  const SolveReport r = solve_geodesic(a0, a1, cfg);
  std::ostringstream os;
  write_path_csv(os, r.path);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,cell_id,m00,m01,m10,m11,lambda_min");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 5 * 2);
}

TEST_CASE("cli runs a bures manifest end to end") {
  const fs::path dir = temp_dir("bures");
  write_file(dir / "m.json", R"({
    "version": "1", "command": "bures",
    "a0": [[1.0, 0.0], [0.0, 1.0]],
    "a1": [[1.0, 0.0], [0.0, 3.0]]
  })");
  const int code = run_cli("bures --manifest " + (dir / "m.json").string() +
                           " --out " + dir.string());
  CHECK(code == 0);
  const ojson result = read_json_file((dir / "result.json").string());
  CHECK(result["bures_sq"].get<double>() ==
        Catch::Approx(0.5358983848622456).epsilon(1e-12));
  CHECK(fs::exists(dir / "metadata.json"));
}

TEST_CASE("cli rejects malformed manifests with exit code 2") {
  const fs::path dir = temp_dir("bad");
  write_file(dir / "m.json", R"({"version": "1", "command": "bures"})");
  CHECK(run_cli("bures --manifest " + (dir / "m.json").string() + " --out " +
                dir.string()) == 2);
  write_file(dir / "v.json", R"({"version": "2", "command": "bures"})");
  CHECK(run_cli("bures --manifest " + (dir / "v.json").string() + " --out " +
                dir.string()) == 2);
  // Command mismatch between subcommand and manifest.
  write_file(dir / "w.json", R"({
    "version": "1", "command": "bures",
    "a0": [[1.0]], "a1": [[2.0]]
  })");
  CHECK(run_cli("geodesic --manifest " + (dir / "w.json").string() +
                " --out " + dir.string()) == 2);
  CHECK(run_cli("bures --manifest " + (dir / "missing.json").string() +
                " --out " + dir.string()) == 2);
}

TEST_CASE("cli reports non-convergence with exit code 3") {
  const fs::path dir = temp_dir("noconv");
  write_file(dir / "m.json", R"({
    "version": "1", "command": "geodesic",
    "grid": {"cells": 2, "matrix_dim": 2, "weights": "uniform"},
    "endpoints": {"generator": {"seed": 3}},
    "solver": {"max_iter": 2}
  })");
  CHECK(run_cli("geodesic --manifest " + (dir / "m.json").string() +
                " --out " + dir.string()) == 3);
  // The result file is still written for inspection.
  CHECK(fs::exists(dir / "result.json"));
}

TEST_CASE("cli results are byte-identical across runs") {
  const fs::path dir = temp_dir("det");
  write_file(dir / "m.json", R"({
    "version": "1", "command": "geodesic",
    "grid": {"cells": 2, "matrix_dim": 2, "weights": "uniform"},
    "endpoints": {"generator": {"seed": 7, "eig_range": [0.3, 3.0]}},
    "solver": {"n_steps": 8}
  })");
  fs::create_directories(dir / "r1");
  fs::create_directories(dir / "r2");
  REQUIRE(run_cli("geodesic --manifest " + (dir / "m.json").string() +
                  " --out " + (dir / "r1").string() + " --threads 1") == 0);
  REQUIRE(run_cli("geodesic --manifest " + (dir / "m.json").string() +
                  " --out " + (dir / "r2").string() + " --threads 1") == 0);
  CHECK(slurp(dir / "r1" / "result.json") == slurp(dir / "r2" / "result.json"));
  CHECK(slurp(dir / "r1" / "path.csv") == slurp(dir / "r2" / "path.csv"));
}

TEST_CASE("manifest solver block rejects unknown keys") {
  const fs::path dir = temp_dir("typo");
  write_file(dir / "m.json", R"({
    "version": "1", "command": "geodesic",
    "grid": {"cells": 2, "matrix_dim": 2, "weights": "uniform"},
    "endpoints": {"generator": {"seed": 3}},
    "solver": {"grad_tool": 1e-6}
  })");
  CHECK(run_cli("geodesic --manifest " + (dir / "m.json").string() +
                " --out " + dir.string()) == 2);
}

TEST_CASE("explicit endpoint matrices flow through the manifest") {
  const fs::path dir = temp_dir("explicit");
  write_file(dir / "m.json", R"({
    "version": "1", "command": "geodesic",
    "grid": {"cells": 2, "matrix_dim": 1, "weights": "uniform"},
    "endpoints": {
      "a0": [[[1.6]], [[0.4]]],
      "a1": [[[0.4]], [[1.6]]]
    },
    "solver": {"n_steps": 16}
  })");
  REQUIRE(run_cli("geodesic --manifest " + (dir / "m.json").string() +
                  " --out " + dir.string()) == 0);
  const ojson result = read_json_file((dir / "result.json").string());
  const double value = result["report"]["value"].get<double>();
  // Scalar masses (0.8, 0.2) to (0.2, 0.8).
  const double bc = 2.0 * std::sqrt(0.8 * 0.2);
  CHECK(value == Catch::Approx(4.0 * std::pow(std::acos(bc), 2)).epsilon(5e-3));
}
