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

#ifndef FRS_RANDOM_HPP
#define FRS_RANDOM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "frs/common.hpp"
#include "frs/measure.hpp"
#include "frs/symmat.hpp"

namespace frs {

/// Seeded random source with fixed value mappings (not the distribution
/// templates of <random>, whose outputs vary across standard libraries), so
/// identical seeds give identical streams everywhere.
class Rng {
 public:
  explicit Rng(long long seed) : engine_(std::uint64_t(seed)) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    const std::uint64_t bits = engine_() >> 11;  // top 53 bits
    return (double(bits) + 0.5) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-ish random orthogonal matrix: QR of a Gaussian matrix with the signs
/// of R's diagonal folded into Q (making the factorization unique).
inline Eigen::MatrixXd random_orthogonal(Rng& rng, int d) {
  Eigen::MatrixXd g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

/// Random SPD matrix Q diag(lambda) Q^T with eigenvalues uniform in
/// [lambda_lo, lambda_hi].
inline SymMat random_spd(Rng& rng, int d, double lambda_lo, double lambda_hi) {
  if (!(lambda_lo > 0.0) || !(lambda_hi >= lambda_lo))
    throw DomainError("random_spd: eigenvalue range must satisfy 0 < lo <= hi");
  Eigen::VectorXd lam(d);
  for (int i = 0; i < d; ++i) lam[i] = rng.uniform(lambda_lo, lambda_hi);
  const Eigen::MatrixXd q = random_orthogonal(rng, d);
  return SymMat(q * lam.asDiagonal() * q.transpose());
}

/// Seeded random measure: one random SPD block per cell, rescaled to unit
/// mass. Deterministic for a fixed seed.
inline MatrixMeasure random_measure(GridPtr grid, long long seed,
                                    double lambda_lo, double lambda_hi) {
  Rng rng(seed);
  std::vector<SymMat> blocks;
  blocks.reserve(grid->cells());
  const int d = grid->matrix_dim();
  for (std::size_t k = 0; k < grid->cells(); ++k)
    blocks.push_back(random_spd(rng, d, lambda_lo, lambda_hi));
  return make_measure(MatrixField(std::move(grid), std::move(blocks)));
}

/// Endpoint pair for manifest-driven experiments; the second measure draws
/// from a decorrelated stream of the same seed.
inline std::pair<MatrixMeasure, MatrixMeasure> generate_endpoints(
    GridPtr grid, long long seed, double lambda_lo, double lambda_hi) {
  MatrixMeasure a0 = random_measure(grid, seed, lambda_lo, lambda_hi);
  MatrixMeasure a1 =
      random_measure(std::move(grid), seed + 0x9e3779b9LL, lambda_lo, lambda_hi);
  return {std::move(a0), std::move(a1)};
}

}  // namespace frs

#endif  // FRS_RANDOM_HPP
