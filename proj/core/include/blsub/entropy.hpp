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

#ifndef BLSUB_ENTROPY_HPP_
#define BLSUB_ENTROPY_HPP_

#include <vector>

#include "blsub/family.hpp"
#include "blsub/grid.hpp"
#include "blsub/linops.hpp"

namespace blsub::entropy {

// Default grid resolutions; chosen so the desk-scale verification runs stay
// inside their stated tolerances within a minute.
inline constexpr int kDefault1d = 2048;
inline constexpr int kDefault2d = 256;
inline constexpr int kDefault3d = 96;
inline constexpr double kDefaultHalfWidth = 12.0;

inline constexpr double kMassTol = 1e-6;
inline constexpr double kBoundaryTol = 1e-8;

// A probability density sampled at cell centers: unit Riemann mass, support
// well inside the box, nonnegative values.
class DensityGrid {
 public:
  static DensityGrid validated(grid::Grid g, double mass_tol = kMassTol,
                               double boundary_tol = kBoundaryTol);

  const grid::Grid& g() const { return g_; }
  int dim() const { return g_.dim; }

 private:
  explicit DensityGrid(grid::Grid g) : g_(std::move(g)) {}
  grid::Grid g_;
};

struct MarginalGrid {
  DensityGrid density;   // 1-dim
  Vec direction;
};

// S(f) = sum f ln f * cell volume, with 0 ln 0 = 0. Note the sign: this is
// the negative of the Shannon entropy.
double entropy(const DensityGrid& f);

// Mass-preserving pushforward of f under x -> a.x: each cell's mass lands in
// the output bin containing the projected cell center.
MarginalGrid marginal(const DensityGrid& f, const Vec& a, int min_bins = kDefault1d);

struct FisherDiagnostics {
  long floored_cells = 0;
  bool interior_zero_region = false;  // zeros spanning more than one cell
};

// I(f) = sum |grad f|^2 / f via central differences (zero ghost cells).
// Cells below the positivity floor contribute nothing.
double fisher(const DensityGrid& f, FisherDiagnostics* diag = nullptr);

// Convolution with the heat kernel of variance 2*tau per axis (separable,
// truncated at 8 standard deviations, renormalized).
DensityGrid heat_step(const DensityGrid& f, double tau);

// sum_j c_j S(marginal(f, a_j)) - S(f). Requires sum c_j = dim.
double subadditivity_gap(const DensityGrid& f, const family::SpanningFamily& a,
                         const family::WeightVector& c);

struct InfoCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Closed-form Gaussian path: sum c_j / (u_j^T Sigma u_j) <= trace(Sigma^{-1}).
// The columns of u must be unit vectors forming a decomposition of the
// identity with weights c.
InfoCheck fisher_superadditivity_check(const Mat& sigma, const Mat& u, const Vec& c,
                                       double tol = 1e-9);

// Grid path: sum c_j I(marginal(f, u_j)) <= I(f).
InfoCheck fisher_superadditivity_check(const DensityGrid& f, const Mat& u, const Vec& c,
                                       double tol = 1e-2);

struct ScanPoint {
  double t = 0.0;
  double info_gap = 0.0;  // I(f_t) - sum c_j I(marginal(f_t, u_j))
};

// Fisher-information gap along the heat flow at the requested times
// (ascending, 2-dim densities).
std::vector<ScanPoint> heat_monotonicity_scan(const DensityGrid& f, const Mat& u,
                                              const Vec& c,
                                              const std::vector<double>& times);

// Samplers used by the verification harness and the bundled corpus.
DensityGrid gaussian_density(const Mat& cov, const Vec& mean,
                             const std::array<grid::Axis, 3>& axes, int dim);

struct MixtureComponent {
  double weight = 1.0;
  Vec mean;
  Mat cov;
};
DensityGrid mixture_density(const std::vector<MixtureComponent>& components,
                            const std::array<grid::Axis, 3>& axes, int dim);

}  // namespace blsub::entropy

#endif  // BLSUB_ENTROPY_HPP_
