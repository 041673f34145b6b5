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

#ifndef BLSUB_BLVERIFY_HPP_
#define BLSUB_BLVERIFY_HPP_

#include <array>
#include <vector>

#include "blsub/entropy.hpp"
#include "blsub/family.hpp"
#include "blsub/grid.hpp"

namespace blsub::blverify {

// One nonnegative 1-dim grid function per linear functional.
struct FactorSet {
  std::vector<grid::Grid> factors;
};

// Integration domain for the n-dim quadrature.
struct GridSpec {
  int dim = 0;
  std::array<grid::Axis, 3> axes{};
};

// Default relative discretization budget for the product-integral checks.
inline constexpr double kRatioTol = 2e-3;

// A symmetric box sized so every a_j . x stays inside factor j's sampled
// range, at the given per-axis resolution.
GridSpec default_domain(const family::SpanningFamily& a, const FactorSet& factors,
                        int cells_per_axis);

// Riemann sum of prod_j f_j(a_j . x) with linearly interpolated factors.
double bl_lhs(const family::SpanningFamily& a, const FactorSet& factors,
              const GridSpec& domain);

enum class Verdict { kHolds, kEquality, kInconclusive, kViolatedNumerical };

struct BLReport {
  double lhs = 0.0;
  double rhs = 0.0;   // e^D prod (int f_j^{1/c_j})^{c_j}
  double ratio = 0.0;
  bool holds = false;
  Verdict verdict = Verdict::kHolds;
  double tol = kRatioTol;
};

// Product-integral inequality with the sharp constant. An apparent violation
// below ten times the budget is reported as inconclusive, never as violated.
BLReport bl_check(const family::SpanningFamily& a, const family::WeightVector& c,
                  const FactorSet& factors, const GridSpec& domain,
                  double tol = kRatioTol);

// Density proportional to exp(sum_j c_j phi_j(a_j . x)) on the domain box;
// the factors carry the exponents phi_j.
entropy::DensityGrid duality_density(const family::SpanningFamily& a,
                                     const family::WeightVector& c,
                                     const FactorSet& log_factors,
                                     const GridSpec& domain);

struct EqualityCorrespondence {
  // sup-norm distance between f and e^{-D} prod marginal_j(a_j . x)^{c_j},
  // relative to sup f.
  double product_residual = 0.0;
  // fixed-point residual of rebuilding f from its marginals and re-extracting
  // them, measured the same way per marginal.
  double marginal_match = 0.0;
};

EqualityCorrespondence equality_correspondence(const family::SpanningFamily& a,
                                               const family::WeightVector& c,
                                               const entropy::DensityGrid& f);

}  // namespace blsub::blverify

#endif  // BLSUB_BLVERIFY_HPP_
