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

#ifndef BLSUB_LINOPS_HPP_
#define BLSUB_LINOPS_HPP_

#include <Eigen/Dense>

#include "blsub/errors.hpp"

namespace blsub {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace linops {

// Default relative tolerance for rank decisions (sigma_i > tol * sigma_max).
inline constexpr double kRankTol = 1e-9;

// A subspace of R^n carried as an orthonormal column basis.
struct Subspace {
  Mat basis;  // ambient_dim x dim, orthonormal columns

  int ambient_dim() const { return static_cast<int>(basis.rows()); }
  int dim() const { return static_cast<int>(basis.cols()); }
  Mat projector() const { return basis * basis.transpose(); }
};

bool all_finite(const Mat& m);

// Number of singular values above rel_tol * sigma_max; 0 for the zero matrix.
int rank_tol(const Mat& m, double rel_tol = kRankTol);

// Orthonormal basis of the column span. Throws InputError on all-zero input.
Subspace orthonormalize(const Mat& vectors);

// Orthogonal complement; the two projectors sum to the identity.
Subspace complement(const Subspace& s);

// Symmetric positive definite X with X*M*X = Id for SPD M.
Mat inv_sqrt_pd(const Mat& m);

// Symmetric positive definite square root of an SPD matrix.
Mat sqrt_pd(const Mat& m);

// ln det M via Cholesky; never forms the determinant itself.
double logdet_pd(const Mat& m);

}  // namespace linops
}  // namespace blsub

#endif  // BLSUB_LINOPS_HPP_
