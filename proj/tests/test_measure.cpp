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

#include <catch2/catch_amalgamated.hpp>

#include "frs/measure.hpp"
#include "frs/random.hpp"

using namespace frs;

TEST_CASE("grid normalization scales weights to 1/d") {
  GridPtr g = Grid::normalized({1.0, 3.0}, 2);
  CHECK(g->cells() == 2);
  CHECK(g->matrix_dim() == 2);
  CHECK(g->weight(0) + g->weight(1) == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(g->weight(1) == Catch::Approx(3.0 * g->weight(0)).epsilon(1e-15));
  CHECK(g->original_volume() == Catch::Approx(4.0).epsilon(1e-15));
  CHECK(g->raw_weights()[1] == 3.0);
  CHECK(g->is_normalized());
}

TEST_CASE("unit grids keep their weights verbatim") {
  GridPtr g = Grid::unit({1.0}, 2);
  CHECK(g->weight(0) == 1.0);
  CHECK_FALSE(g->is_normalized());
  GridPtr sc = Grid::single_cell_unit(3);
  CHECK(sc->cells() == 1);
  CHECK(sc->weight(0) == 1.0);
}

TEST_CASE("grids validate their input") {
  CHECK_THROWS_AS(Grid::normalized({1.0, 0.0}, 2), DomainError);
  CHECK_THROWS_AS(Grid::normalized({1.0, -2.0}, 2), DomainError);
  CHECK_THROWS_AS(Grid::normalized({}, 2), DomainError);
  CHECK_THROWS_AS(Grid::normalized({1.0}, 0), DimensionError);
}

TEST_CASE("mass of the uniform identity measure is one") {
  for (int d : {1, 2, 3}) {
    for (int k : {1, 2, 5}) {
      GridPtr g = Grid::uniform(k, d);
      const MatrixMeasure id = uniform_identity(g);
      CHECK(mass(id.field()) == Catch::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("field arithmetic and compatibility checks") {
  GridPtr g = Grid::uniform(2, 2);
  MatrixField a = MatrixField::constant(g, SymMat::identity(2));
  MatrixField b = MatrixField::constant(g, SymMat::diagonal(
                                               Eigen::Vector2d(1.0, 2.0)));
  const MatrixField c = a + 2.0 * b - b;
  CHECK(c[0](1, 1) == Catch::Approx(3.0).epsilon(1e-15));
  GridPtr other = Grid::uniform(3, 2);
  CHECK_THROWS_AS(a += MatrixField::zero(other), DimensionError);
}

TEST_CASE("project_tangent on a one-cell example") {
  // Base diag(1.5, 0.5) on a single cell of weight 1/2, raw direction
  // diag(1, 0). The trace average is 0.75, so the projected potential is
  // diag(0.25, -0.75).
  GridPtr g = Grid::uniform(1, 2);
  const MatrixField base(g, {SymMat::diagonal(Eigen::Vector2d(1.5, 0.5))});
  const MatrixField raw(g, {SymMat::diagonal(Eigen::Vector2d(1.0, 0.0))});
  const MatrixField u = project_tangent(base, raw);
  CHECK(u[0](0, 0) == Catch::Approx(0.25).epsilon(1e-14));
  CHECK(u[0](1, 1) == Catch::Approx(-0.75).epsilon(1e-14));
  CHECK(std::abs(trace_average(base, u)) <= 1e-15);
}

TEST_CASE("project_tangent is idempotent and zero-averaging") {
  Rng rng(61);
  GridPtr g = Grid::normalized({0.2, 0.5, 0.3}, 2);
  const MatrixMeasure a = random_measure(g, 71, 0.3, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SymMat> blocks;
    for (int k = 0; k < 3; ++k) {
      Eigen::MatrixXd m(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = rng.normal();
      blocks.push_back(SymMat(m));
    }
    const MatrixField raw(g, blocks);
    const MatrixField u = project_tangent(a.field(), raw);
    CHECK(std::abs(trace_average(a.field(), u)) <= 1e-12);
    const MatrixField u2 = project_tangent(a.field(), u);
    for (int k = 0; k < 3; ++k)
      CHECK((u2[k].mat() - u[k].mat()).norm() <= 1e-12);
  }
}

TEST_CASE("measure validation") {
  GridPtr g = Grid::uniform(2, 2);
  // Correct mass but an indefinite block.
  std::vector<SymMat> blocks{SymMat::diagonal(Eigen::Vector2d(3.0, 2.0)),
                             SymMat::diagonal(Eigen::Vector2d(-1.0, 0.0))};
  CHECK_THROWS_AS(MatrixMeasure(MatrixField(g, blocks)), DomainError);
  // PSD blocks but twice the unit mass.
  std::vector<SymMat> heavy{SymMat(2.0 * SymMat::identity(2).mat()),
                            SymMat(2.0 * SymMat::identity(2).mat())};
  CHECK_THROWS_AS(MatrixMeasure(MatrixField(g, heavy)), DomainError);
  CHECK_NOTHROW(make_measure(MatrixField(g, heavy)));
  const MatrixMeasure fixed = make_measure(MatrixField(g, heavy));
  CHECK(mass(fixed.field()) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tangent fields enforce the zero-average constraint") {
  GridPtr g = Grid::uniform(2, 2);
  const MatrixMeasure a = random_measure(g, 83, 0.3, 3.0);
  const MatrixField biased = MatrixField::constant(g, SymMat::identity(2));
  CHECK_THROWS_AS(TangentField(a, biased), DomainError);
  const TangentField ok = project_tangent(a, biased);
  CHECK(ok.cells() == 2);
  // The projection of a multiple of the identity is zero.
  CHECK(fr_norm_sq(ok) <= 1e-20);
}

TEST_CASE("fr_norm_sq matches the blockwise metric") {
  GridPtr g = Grid::normalized({0.4, 0.6}, 2);
  const MatrixMeasure a = random_measure(g, 97, 0.3, 3.0);
  Rng rng(101);
  std::vector<SymMat> blocks;
  for (int k = 0; k < 2; ++k) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = rng.normal();
    blocks.push_back(SymMat(m));
  }
  const MatrixField u = project_tangent(a.field(), MatrixField(g, blocks));
  double expect = 0.0;
  for (int k = 0; k < 2; ++k)
    expect += g->weight(k) * (u[k].mat() * a[k].mat() * u[k].mat()).trace();
  CHECK(fr_norm_sq(a.field(), u) == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("random measures are reproducible for a fixed seed") {
  GridPtr g = Grid::uniform(3, 2);
  const MatrixMeasure a = random_measure(g, 7, 0.3, 3.0);
  const MatrixMeasure b = random_measure(g, 7, 0.3, 3.0);
  for (int k = 0; k < 3; ++k) CHECK(a[k].mat() == b[k].mat());
  const MatrixMeasure c = random_measure(g, 8, 0.3, 3.0);
  CHECK((a[0].mat() - c[0].mat()).norm() > 0.0);
}
