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
#include "frs/random.hpp"

using namespace frs;

TEST_CASE("bures_sq between commuting diagonal matrices") {
  // For commuting PSD matrices the distance reduces to the Euclidean
  // distance between the square roots: here (1-2)^2 + (2-1)^2 = 2.
  const SymMat a = SymMat::diagonal(Eigen::Vector2d(1.0, 4.0));
  const SymMat b = SymMat::diagonal(Eigen::Vector2d(4.0, 1.0));
  CHECK(bures_sq(a, b) == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("bures_sq against a frozen value") {
  // tr(I) + tr(diag(1,3)) - 2 tr(diag(1, sqrt(3))) = 4 - 2 sqrt(3).
  const SymMat a = SymMat::identity(2);
  const SymMat b = SymMat::diagonal(Eigen::Vector2d(1.0, 3.0));
  CHECK(bures_sq(a, b) ==
        Catch::Approx(0.5358983848622456).epsilon(1e-12));
}

TEST_CASE("bures_sq is symmetric, nonnegative, and zero at equal inputs") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    const SymMat a = random_spd(rng, d, 0.2, 4.0);
    const SymMat b = random_spd(rng, d, 0.2, 4.0);
    const double dab = bures_sq(a, b);
    CHECK(dab >= 0.0);
    CHECK(std::abs(dab - bures_sq(b, a)) <= 1e-10 * (1.0 + dab));
    CHECK(bures_sq(a, a) <= 1e-10 * (1.0 + a.trace()));
  }
}

TEST_CASE("bures_sq scales linearly under joint scaling") {
  Rng rng(37);
  const SymMat a = random_spd(rng, 3, 0.2, 4.0);
  const SymMat b = random_spd(rng, 3, 0.2, 4.0);
  const double base = bures_sq(a, b);
  for (double s : {0.5, 2.0, 7.25})
    CHECK(bures_sq(s * a, s * b) == Catch::Approx(s * base).epsilon(1e-10));
}

TEST_CASE("bures satisfies the triangle inequality") {
  Rng rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 3;
    const SymMat a = random_spd(rng, d, 0.2, 4.0);
    const SymMat b = random_spd(rng, d, 0.2, 4.0);
    const SymMat c = random_spd(rng, d, 0.2, 4.0);
    CHECK(std::sqrt(bures_sq(a, b)) <=
          std::sqrt(bures_sq(a, c)) + std::sqrt(bures_sq(c, b)) + 1e-8);
  }
}

TEST_CASE("bures_sq rejects indefinite input") {
  const SymMat bad = SymMat::diagonal(Eigen::Vector2d(1.0, -0.5));
  CHECK_THROWS_AS(bures_sq(bad, SymMat::identity(2)), DomainError);
  CHECK_THROWS_AS(bures_sq(SymMat::identity(2), bad), DomainError);
}

TEST_CASE("gaussian_w2_sq splits into mean and covariance parts") {
  const GaussianParams g0(Eigen::Vector2d(0.0, 0.0), SymMat::identity(2));
  const GaussianParams g1(Eigen::Vector2d(1.0, 1.0), SymMat::identity(2));
  CHECK(gaussian_w2_sq(g0, g1) == Catch::Approx(2.0).epsilon(1e-12));

  const GaussianParams g2(Eigen::Vector2d(1.0, 1.0),
                          SymMat::diagonal(Eigen::Vector2d(1.0, 3.0)));
  CHECK(gaussian_w2_sq(g0, g2) ==
        Catch::Approx(2.5358983848622456).epsilon(1e-12));
}

TEST_CASE("gaussian params validate dimensions and definiteness") {
  CHECK_THROWS_AS(
      GaussianParams(Eigen::Vector3d::Zero(), SymMat::identity(2)),
      DimensionError);
  CHECK_THROWS_AS(GaussianParams(Eigen::Vector2d::Zero(),
                                 SymMat::diagonal(Eigen::Vector2d(1.0, -1.0))),
                  DomainError);
}

TEST_CASE("metric against a hand-computed value") {
  // tr(U A U) with A = diag(1,3) and U the off-diagonal unit matrix:
  // U A U = diag(3, 1), so the value is 4.
  const SymMat a = SymMat::diagonal(Eigen::Vector2d(1.0, 3.0));
  Eigen::MatrixXd u(2, 2);
  u << 0.0, 1.0, 1.0, 0.0;
  CHECK(metric(a, SymMat(u), SymMat(u)) == Catch::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("metric is symmetric and positive on nonzero potentials") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const SymMat a = random_spd(rng, 3, 0.3, 3.0);
    Eigen::MatrixXd um(3, 3), vm(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        um(i, j) = rng.normal();
        vm(i, j) = rng.normal();
      }
    const SymMat u(um), v(vm);
    CHECK(metric(a, u, v) == Catch::Approx(metric(a, v, u)).margin(1e-12));
    CHECK(metric(a, u, u) > 0.0);
  }
}

TEST_CASE("riesz map matches the metric through the flat pairing") {
  // <riesz(a, u), v> in the Frobenius pairing equals the metric value,
  // the defining property of the change between potentials and increments.
  Rng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const SymMat a = random_spd(rng, 3, 0.3, 3.0);
    Eigen::MatrixXd um(3, 3), vm(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        um(i, j) = rng.normal();
        vm(i, j) = rng.normal();
      }
    const SymMat u(um), v(vm);
    CHECK(frobenius(riesz(a, u), v) ==
          Catch::Approx(metric(a, u, v)).margin(1e-10));
  }
}

TEST_CASE("riesz and lyapunov_solve are mutually inverse") {
  Rng rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const SymMat a = random_spd(rng, 3, 0.3, 3.0);
    Eigen::MatrixXd um(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) um(i, j) = rng.normal();
    const SymMat u(um);
    const SymMat back = lyapunov_solve(a, riesz(a, u));
    CHECK((back.mat() - u.mat()).norm() <= 1e-8 * std::max(1.0, u.norm()));
  }
}
