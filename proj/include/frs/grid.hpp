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

#ifndef FRS_GRID_HPP
#define FRS_GRID_HPP

#include <memory>
#include <vector>

#include "frs/common.hpp"

namespace frs {

/// Discretization of the base domain: K quadrature weights plus the matrix
/// dimension d of the blocks living on the cells. In normalized form the
/// weights sum to 1/d, so the identity-valued measure has unit trace mass;
/// the constructor rescales and keeps the original total volume. Grids built
/// with `unit(...)` skip the rescaling; they carry plain volumes for
/// mass-unconstrained (Hellinger / single-matrix) work.
class Grid {
 public:
  static std::shared_ptr<const Grid> normalized(
      std::vector<double> raw_weights, int matrix_dim,
      std::vector<std::vector<double>> coordinates = {}) {
    return std::shared_ptr<const Grid>(
        new Grid(std::move(raw_weights), matrix_dim, true, std::move(coordinates)));
  }

  static std::shared_ptr<const Grid> uniform(std::size_t cells, int matrix_dim) {
    return normalized(std::vector<double>(cells, 1.0 / double(cells)), matrix_dim);
  }

  static std::shared_ptr<const Grid> unit(std::vector<double> raw_weights,
                                          int matrix_dim) {
    return std::shared_ptr<const Grid>(
        new Grid(std::move(raw_weights), matrix_dim, false, {}));
  }

  /// One cell of volume 1; the natural habitat of single-matrix actions.
  static std::shared_ptr<const Grid> single_cell_unit(int matrix_dim) {
    return unit({1.0}, matrix_dim);
  }

  std::size_t cells() const { return weights_.size(); }
  int matrix_dim() const { return matrix_dim_; }
  double weight(std::size_t k) const { return weights_[k]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& raw_weights() const { return raw_weights_; }
  double original_volume() const { return original_volume_; }
  bool is_normalized() const { return normalized_; }
  const std::vector<std::vector<double>>& coordinates() const { return coordinates_; }

 private:
  Grid(std::vector<double> raw_weights, int matrix_dim, bool normalize,
       std::vector<std::vector<double>> coordinates)
      : matrix_dim_(matrix_dim),
        raw_weights_(std::move(raw_weights)),
        coordinates_(std::move(coordinates)),
        normalized_(normalize) {
    if (matrix_dim_ < 1) throw DimensionError("Grid: matrix_dim must be >= 1");
    if (raw_weights_.empty()) throw DomainError("Grid: needs at least one cell");
    for (std::size_t k = 0; k < raw_weights_.size(); ++k)
      if (!(raw_weights_[k] > 0.0))
        throw DomainError("Grid: weight of cell " + std::to_string(k) +
                          " must be positive");
    if (!coordinates_.empty() && coordinates_.size() != raw_weights_.size())
      throw DimensionError("Grid: coordinate count does not match cell count");
    original_volume_ = pairwise_sum(raw_weights_);
    weights_ = raw_weights_;
    if (normalize) {
      const double scale = 1.0 / (matrix_dim_ * original_volume_);
      for (double& w : weights_) w *= scale;
    }
  }

  int matrix_dim_;
  std::vector<double> weights_;      // normalized: sum = 1/d
  std::vector<double> raw_weights_;  // as given
  double original_volume_;
  std::vector<std::vector<double>> coordinates_;  // per-cell metadata, I/O only
  bool normalized_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline bool same_grid(const Grid& a, const Grid& b) {
  return a.matrix_dim() == b.matrix_dim() && a.weights() == b.weights();
}

}  // namespace frs

#endif  // FRS_GRID_HPP
