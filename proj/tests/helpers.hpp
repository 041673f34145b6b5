// Copyright 2026 The Authors.
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

#ifndef BLSUB_TESTS_HELPERS_HPP_
#define BLSUB_TESTS_HELPERS_HPP_

#include <cmath>
#include <numbers>
#include <random>

#include "blsub/family.hpp"
#include "blsub/linops.hpp"

namespace blsub::testing {

inline constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

// Equiangular unit 3-frame in the plane (weights 2/3 make it tight).
inline Mat mercedes_columns() {
  Mat u(2, 3);
  for (int j = 0; j < 3; ++j) {
    const double th = std::numbers::pi / 2 + 2.0 * std::numbers::pi * j / 3.0;
    u(0, j) = std::cos(th);
    u(1, j) = std::sin(th);
  }
  return u;
}

inline family::SpanningFamily mercedes_family() {
  return family::SpanningFamily(mercedes_columns());
}

inline family::WeightVector mercedes_weights() {
  return family::WeightVector(Vec::Constant(3, 2.0 / 3.0));
}

// Tetrahedral unit 4-frame in R^3 (weights 3/4 make it tight).
inline Mat tetra_columns() {
  Mat u(3, 4);
  u.col(0) << 1, 1, 1;
  u.col(1) << 1, -1, -1;
  u.col(2) << -1, 1, -1;
  u.col(3) << -1, -1, 1;
  return u / std::sqrt(3.0);
}

inline Mat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  }
  return m;
}

inline Mat random_orthogonal(int n, std::mt19937_64& rng) {
  const Mat a = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  // Fix the signs so the distribution is Haar-like and deterministic per seed.
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

inline Mat random_spd(int n, std::mt19937_64& rng, double lo = 0.3, double hi = 3.0) {
  const Mat q = random_orthogonal(n, rng);
  std::uniform_real_distribution<double> u(lo, hi);
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = u(rng);
  return q * d.asDiagonal() * q.transpose();
}

inline Mat random_invertible(int n, std::mt19937_64& rng) {
  for (;;) {
    const Mat t = random_matrix(n, n, rng);
    if (std::abs(t.determinant()) > 0.1) return t;
  }
}

}  // namespace blsub::testing

#endif  // BLSUB_TESTS_HELPERS_HPP_
