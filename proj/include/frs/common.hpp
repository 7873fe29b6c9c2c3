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

#ifndef FRS_COMMON_HPP
#define FRS_COMMON_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace frs {

// Relative eigenvalue floor (w.r.t. the largest eigenvalue) below which a
// nominally positive matrix is treated as singular.
inline constexpr double kEigFloorRel = 1e-10;

// Tolerance for PSD classification of O(1)-scale matrices.
inline constexpr double kPsdTol = 1e-12;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input outside the admissible cone (indefinite where PSD is required, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Positive-definiteness lost where it is required (spectral log/inverse,
// Lyapunov solves).
struct SingularMatrixError : DomainError {
  using DomainError::DomainError;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative solver stopped without meeting its tolerance.
struct ConvergenceError : NumericError {
  ConvergenceError(const std::string& what, double grad_norm)
      : NumericError(what), final_grad_norm(grad_norm) {}
  double final_grad_norm;
};

// Manifest / input-file problems.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pairwise (cascade) summation. Deterministic for a fixed term order and
/// better conditioned than a running sum; all functional accumulations in
/// the library go through here.
inline double pairwise_sum(std::span<const double> terms) {
  const std::size_t n = terms.size();
  if (n <= 8) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(terms.subspan(0, half)) + pairwise_sum(terms.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& terms) {
  return pairwise_sum(std::span<const double>(terms));
}

}  // namespace frs

#endif  // FRS_COMMON_HPP
