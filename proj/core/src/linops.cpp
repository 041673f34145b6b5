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

#include "blsub/linops.hpp"

#include <cmath>
#include <string>

namespace blsub::linops {

namespace {

void require_symmetric(const Mat& m, const char* op) {
  if (m.rows() != m.cols()) {
    throw InputError(std::string(op) + ": matrix is not square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw InputError(std::string(op) + ": matrix is not symmetric (max |M - M^T| = " +
                     std::to_string(asym) + ")");
  }
}

Eigen::SelfAdjointEigenSolver<Mat> eigensolve_pd(const Mat& m, const char* op) {
  require_symmetric(m, op);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) {
    throw NumericError(std::string(op) + ": eigendecomposition failed");
  }
  const double lo = es.eigenvalues().minCoeff();
  if (!(lo > 0.0)) {
    throw NumericError(std::string(op) + ": matrix is not positive definite (smallest eigenvalue " +
                       std::to_string(lo) + ")");
  }
  return es;
}

}  // namespace

bool all_finite(const Mat& m) { return m.allFinite(); }

int rank_tol(const Mat& m, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw InputError("rank_tol: rel_tol must lie in (0,1)");
  }
  if (!all_finite(m)) {
    throw InputError("rank_tol: matrix has non-finite entries");
  }
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++r;
  }
  return r;
}

Subspace orthonormalize(const Mat& vectors) {
  if (!all_finite(vectors)) {
    throw InputError("orthonormalize: non-finite entries");
  }
  if (vectors.size() == 0) {
    throw InputError("orthonormalize: empty input");
  }
  const int r = rank_tol(vectors);
  if (r == 0) {
    throw InputError("orthonormalize: all columns are zero");
  }
  Eigen::JacobiSVD<Mat> svd(vectors, Eigen::ComputeThinU);
  Subspace s;
  s.basis = svd.matrixU().leftCols(r);
  return s;
}

Subspace complement(const Subspace& s) {
  const int n = s.ambient_dim();
  const int d = s.dim();
  if (d >= n) {
    throw InputError("complement: subspace is already full-dimensional");
  }
  Eigen::JacobiSVD<Mat> svd(s.basis, Eigen::ComputeFullU);
  Subspace c;
  c.basis = svd.matrixU().rightCols(n - d);
  return c;
}

Mat inv_sqrt_pd(const Mat& m) {
  auto es = eigensolve_pd(m, "inv_sqrt_pd");
  Vec inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

Mat sqrt_pd(const Mat& m) {
  auto es = eigensolve_pd(m, "sqrt_pd");
  Vec root = es.eigenvalues().cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

double logdet_pd(const Mat& m) {
  require_symmetric(m, "logdet_pd");
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericError("logdet_pd: matrix is not positive definite");
  }
  double acc = 0.0;
  const Mat l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    acc += std::log(l(i, i));
  }
  return 2.0 * acc;
}

}  // namespace blsub::linops
