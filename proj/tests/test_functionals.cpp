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

#include "frs/bures.hpp"
#include "frs/functionals.hpp"
#include "frs/random.hpp"

using namespace frs;

namespace {

MatrixField one_cell(double l0, double l1) {
  GridPtr g = Grid::uniform(1, 2);
  return MatrixField(g, {SymMat::diagonal(Eigen::Vector2d(l0, l1))});
}

}  // namespace

TEST_CASE("entropy of a frozen one-cell measure") {
  // w = 1/2, A = diag(1.5, 0.5):
  // (1/2) * (1/2) * [(1.5 - log 1.5 - 1) + (0.5 - log 0.5 - 1)].
  const FunctionalValue e = entropy(one_cell(1.5, 0.5));
  CHECK(e.finite);
  CHECK(e.value == Catch::Approx(0.0719205181129452).epsilon(1e-13));
}

TEST_CASE("fisher information of a frozen one-cell measure") {
  // (1/4) * ((1/2) * (2/3 + 2) - 1) = 1/12.
  const FunctionalValue f = fisher_info(one_cell(1.5, 0.5));
  CHECK(f.finite);
  CHECK(f.value == Catch::Approx(1.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("von Neumann entropy of a frozen one-cell measure") {
  // (1/2) * (1.5 log 1.5 + 0.5 log 0.5).
  const FunctionalValue s = von_neumann(one_cell(1.5, 0.5));
  CHECK(s.finite);
  CHECK(s.value == Catch::Approx(0.1308120359411370).epsilon(1e-12));
}

TEST_CASE("functionals vanish exactly at the uniform identity") {
  GridPtr g = Grid::uniform(4, 3);
  const MatrixMeasure id = uniform_identity(g);
  CHECK(std::abs(entropy(id).value) <= 1e-14);
  CHECK(std::abs(fisher_info(id).value) <= 1e-14);
  CHECK(std::abs(von_neumann(id).value) <= 1e-14);
}

TEST_CASE("entropy and fisher are nonnegative and flag the boundary") {
  GridPtr g = Grid::uniform(3, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const MatrixMeasure a = random_measure(g, 100 + trial, 0.2, 4.0);
    CHECK(entropy(a).value >= 0.0);
    CHECK(fisher_info(a).value >= 0.0);
  }
  const MatrixField singular(
      g, {SymMat::diagonal(Eigen::Vector2d(3.0, 0.0)),
          SymMat::diagonal(Eigen::Vector2d(1.5, 1.5)),
          SymMat::diagonal(Eigen::Vector2d(0.5, 0.5))});
  CHECK_FALSE(entropy(singular).finite);
  CHECK_FALSE(fisher_info(singular).finite);
  // The von Neumann integrand extends by continuity to the boundary.
  CHECK(von_neumann(singular).finite);
  CHECK_FALSE(von_neumann(singular, true).finite);
}

TEST_CASE("entropy gradient has zero trace average") {
  GridPtr g = Grid::normalized({0.3, 0.3, 0.4}, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixMeasure a = random_measure(g, 200 + trial, 0.3, 3.0);
    const FunctionalValue e = entropy(a, true);
    REQUIRE(e.gradient.has_value());
    std::vector<double> terms(a.cells());
    for (std::size_t k = 0; k < a.cells(); ++k)
      terms[k] = g->weight(k) * (*e.gradient)[k].trace();
    CHECK(std::abs(pairwise_sum(terms)) <= 1e-12);
  }
}

TEST_CASE("gradients match finite differences of the functional") {
  GridPtr g = Grid::uniform(3, 2);
  Rng rng(301);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixMeasure a = random_measure(g, 300 + trial, 0.4, 3.0);
    // A mass-tangent direction: the increment of a projected potential.
    std::vector<SymMat> wm;
    for (int k = 0; k < 3; ++k) {
      Eigen::MatrixXd m(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = rng.normal();
      wm.push_back(SymMat(m));
    }
    const MatrixField w = project_tangent(a.field(), MatrixField(g, wm));
    std::vector<SymMat> vb;
    for (int k = 0; k < 3; ++k) vb.push_back(riesz(a[k], w[k]));
    const MatrixField v(g, vb);

    using Fn = FunctionalValue (*)(const MatrixField&, bool);
    for (Fn fn : {static_cast<Fn>(&entropy), static_cast<Fn>(&von_neumann)}) {
      const FunctionalValue at = fn(a.field(), true);
      REQUIRE(at.gradient.has_value());
      const double dd_an = pairing(*at.gradient, w);
      const double h = 1e-5;
      const double plus = fn(a.field() + h * v, false).value;
      const double minus = fn(a.field() - h * v, false).value;
      const double dd_fd = (plus - minus) / (2.0 * h);
      CHECK(std::abs(dd_an - dd_fd) <= 1e-6 * std::max(1.0, std::abs(dd_an)));
    }
  }
}

TEST_CASE("fisher information equals the squared entropy gradient norm") {
  GridPtr g = Grid::uniform(3, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixMeasure a = random_measure(g, 400 + trial, 0.3, 3.0);
    std::vector<SymMat> fp;
    for (std::size_t k = 0; k < a.cells(); ++k)
      fp.push_back(spectral_fn(
          a[k], [](double x) { return 0.5 * (1.0 - 1.0 / x); }, 1e-14,
          FloorPolicy::strict));
    const MatrixField pot =
        grad_fr_potential(a.field(), MatrixField(a.grid(), fp));
    const double norm_sq = fr_norm_sq(a.field(), pot);
    const double fisher = fisher_info(a).value;
    CHECK(std::abs(norm_sq - fisher) <= 1e-8 * std::max(1.0, fisher));
  }
}

TEST_CASE("grad_fr increments are mass neutral") {
  GridPtr g = Grid::normalized({0.25, 0.75}, 2);
  const MatrixMeasure a = random_measure(g, 500, 0.3, 3.0);
  Rng rng(501);
  std::vector<SymMat> fp;
  for (int k = 0; k < 2; ++k) {
    Eigen::MatrixXd m(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = rng.normal();
    fp.push_back(SymMat(m));
  }
  const MatrixField grad = grad_fr(a.field(), MatrixField(g, fp));
  std::vector<double> terms(2);
  for (int k = 0; k < 2; ++k) terms[k] = g->weight(k) * grad[k].trace();
  CHECK(std::abs(pairwise_sum(terms)) <= 1e-12);
}
