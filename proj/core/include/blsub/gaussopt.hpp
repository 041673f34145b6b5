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

#ifndef BLSUB_GAUSSOPT_HPP_
#define BLSUB_GAUSSOPT_HPP_

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blsub/family.hpp"
#include "blsub/linops.hpp"

namespace blsub::gaussopt {

// Log-squared diagonal scalings t_j = ln s_j^2.
struct ScalingPoint {
  Vec t;
};

struct GaussOptOptions {
  double grad_tol = 1e-10;   // convergence on the sup-norm of the gradient
  int max_iterations = 200;
  double t_cap = 60.0;       // recession detection threshold on |t|_inf
};

// Outcome of maximizing F(t) = sum c_j t_j - Phi(t). `attained` is true only
// for interior instances; boundary instances carry a 0/1-patterned recession
// direction built from a minimal critical subset.
struct GaussOptResult {
  Vec t_star;
  double value = 0.0;     // best value of F found (the sup for interior c)
  double grad_norm = 0.0; // final |c - grad Phi|_inf
  bool attained = false;
  int iterations = 0;
  std::optional<Vec> recession;
};

// ln det(sum_j e^{t_j} a_j a_j^T), via per-column scaling and Cholesky.
double phi(const family::SpanningFamily& a, const Vec& t);

// Gradient entries e^{t_j} a_j^T (A e^T A^T)^{-1} a_j; each lies in [0,1] and
// they sum to n.
Vec phi_grad(const family::SpanningFamily& a, const Vec& t);

// Hessian H_jk = delta_jk g_j - P_jk^2 with P the projection onto the row
// space of the scaled family; positive semidefinite.
Mat phi_hess(const family::SpanningFamily& a, const Vec& t);

GaussOptResult maximize_gap(const family::SpanningFamily& a,
                            const family::WeightVector& c,
                            const GaussOptOptions& opts = {});

// One node of the splitting tree. Leaves are interior solves or the exact
// one-dimensional closed form; internal nodes record the peeled subset.
struct TreeNode {
  enum class Kind { kInteriorLeaf, kLineLeaf, kSplit, kInfeasible };
  Kind kind = Kind::kInteriorLeaf;
  std::vector<int> indices;       // original column labels at this node
  int ambient_dim = 0;
  double value = 0.0;             // D contribution of this subtree
  std::optional<GaussOptResult> opt;       // interior leaves
  std::vector<int> split_subset;           // internal nodes: the peeled J
  std::vector<double> cross_check_values;  // D via the other minimal subsets
  std::vector<TreeNode> children;
};

struct ConstantReport {
  double D = std::numeric_limits<double>::infinity();
  family::FeasibilityReport feasibility;
  TreeNode tree;
  bool attained = false;  // extremizers exist (totally reducible)

  bool finite() const { return std::isfinite(D); }
};

ConstantReport constant(const family::SpanningFamily& a, const family::WeightVector& c);

// Centered Gaussian, described by its covariance.
struct GaussianSpec {
  Mat covariance;
};

// Exact Gaussian value of the entropy gap for covariance Sigma:
// (ln det Sigma - sum c_j ln(a_j^T Sigma a_j)) / 2. Requires sum c_j = n.
double gaussian_gap(const family::SpanningFamily& a, const family::WeightVector& c,
                    const GaussianSpec& g);

struct FrameMatrix {
  Mat R;               // symmetric positive definite, trace(R^2) = n
  double residual;     // operator norm of sum c_j u_j u_j^T - Id
  double trace_R2;
};

// Thrown by frame_matrix when no frame change of variables exists.
class NotReducibleError : public Error {
 public:
  NotReducibleError(const std::string& what, family::ReducibilityReport report)
      : Error(what), report(std::move(report)) {}
  family::ReducibilityReport report;
};

FrameMatrix frame_matrix(const family::SpanningFamily& a, const family::WeightVector& c);

struct ExtremizerBlock {
  std::vector<int> indices;  // original column labels
  int dim = 0;
  bool free = false;   // one-dimensional blocks admit any finite-entropy density
  Mat basis;           // n x dim orthonormal basis of the transformed block
  Mat covariance;      // dim x dim block covariance R_i^2 (empty when free)
};

struct ExtremizerDescription {
  bool exists = false;
  std::vector<ExtremizerBlock> blocks;
  Mat transform;  // symmetric positive T realizing the orthogonal decomposition
  std::optional<std::vector<int>> certificate;  // when no extremizer exists
};

ExtremizerDescription extremizers(const family::SpanningFamily& a,
                                  const family::WeightVector& c);

struct HadamardCheck {
  double lhs = 0.0;  // |det T|
  double rhs = 0.0;  // e^D prod |T a_j|^{c_j}
  bool holds = false;
};

HadamardCheck hadamard_check(const family::SpanningFamily& a,
                             const family::WeightVector& c, const Mat& t);

// Legendre-transform value at c: 2 D(A,c) + sum c_j ln c_j.
double phi_star(const family::SpanningFamily& a, const family::WeightVector& c);

// The stationary weight vector grad Phi(0) = (a_j^T (A A^T)^{-1} a_j)_j.
family::WeightVector minimizing_c(const family::SpanningFamily& a);

enum class WitnessKind {
  kDilation,        // sum c_j != n: scale X -> lambda X
  kSubsetCollapse,  // violated subset: compress its span as lambda -> 0
  kSpanDeficiency,  // columns span a proper subspace: inflate the complement
};

struct DivergenceWitness {
  WitnessKind kind;
  std::vector<int> subset;   // the subset driving the divergence (when any)
  linops::Subspace space;    // the subspace V of the Gaussian family
  double lambda_rate = 0.0;  // predicted gap slope per ln(lambda)
  std::array<double, 2> lambdas{};   // probe values
  std::array<double, 2> gaps{};      // Gaussian gap at the probes
  double fitted_rate = 0.0;          // slope fitted through the probes
};

// Produces a one-parameter Gaussian family along which the entropy gap
// diverges, for weight vectors outside the polytope (or a non-spanning
// column matrix, which bypasses SpanningFamily validation).
DivergenceWitness divergence_witness(const Mat& columns, const Vec& c,
                                     double tol = family::kEqTol);

}  // namespace blsub::gaussopt

#endif  // BLSUB_GAUSSOPT_HPP_
