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

#ifndef BLSUB_FAMILY_HPP_
#define BLSUB_FAMILY_HPP_

#include <optional>
#include <vector>

#include "blsub/linops.hpp"

namespace blsub::family {

// Tolerance separating "equality" from "strict" in the polytope conditions.
inline constexpr double kEqTol = 1e-9;

// Enumeration envelopes (exponential searches, documented).
inline constexpr int kMaxSubsetEnum = 24;
inline constexpr int kMaxBipartition = 20;

// A family of m nonzero vectors spanning R^n, stored as the columns of an
// n x m matrix.
class SpanningFamily {
 public:
  explicit SpanningFamily(Mat columns);

  int n() const { return static_cast<int>(columns_.rows()); }
  int m() const { return static_cast<int>(columns_.cols()); }
  const Mat& columns() const { return columns_; }
  Vec column(int j) const { return columns_.col(j); }

  // Family restricted to a subset of column indices (must still span a
  // nontrivial space; spanning of the sub-span, not of R^n).
  Mat submatrix(const std::vector<int>& indices) const;

 private:
  Mat columns_;
};

// Exponents c in [0,1]^m.
class WeightVector {
 public:
  explicit WeightVector(Vec c);

  int size() const { return static_cast<int>(c_.size()); }
  const Vec& values() const { return c_; }
  double operator[](int j) const { return c_(j); }
  double sum() const { return c_.sum(); }
  Vec subvector(const std::vector<int>& indices) const;

 private:
  Vec c_;
};

// One subset row of a feasibility report: indices, weight sum, span dim.
struct SubsetRecord {
  std::vector<int> indices;
  double weight_sum = 0.0;
  int dim = 0;
};

struct FeasibilityReport {
  double sum_c = 0.0;
  bool in_KA = false;
  bool in_interior = false;
  // Proper nonempty subsets with weight_sum > dim + tol, sorted by
  // cardinality then lexicographically, capped at kReportCap entries.
  std::vector<SubsetRecord> violations;
  // Proper nonempty subsets with |weight_sum - dim| <= tol, same order/cap.
  std::vector<SubsetRecord> critical;
  long n_violations_total = 0;
  long n_critical_total = 0;
  bool sum_matches = false;  // |sum_c - n| <= tol

  static constexpr int kReportCap = 64;
};

FeasibilityReport feasibility(const SpanningFamily& a, const WeightVector& c,
                              double tol = kEqTol);

// All minimal-cardinality proper nonempty equality subsets, sorted
// lexicographically. Requires c in K_A \ K_A^o.
std::vector<std::vector<int>> minimal_critical(const SpanningFamily& a,
                                               const WeightVector& c,
                                               double tol = kEqTol);

// The two sub-instances produced by peeling a critical subset J.
struct SplitInstance {
  SpanningFamily inner;       // {a_j : j in J} in coords of an ON basis of V_J
  WeightVector inner_weights;
  std::vector<int> inner_indices;
  Mat inner_basis;            // n x dim(V_J), orthonormal columns

  SpanningFamily outer;       // projections P_J^perp a_j, j not in J, in
  WeightVector outer_weights; // coords of an ON basis of V_J^perp
  std::vector<int> outer_indices;
  Mat outer_basis;            // n x dim(V_J^perp)
};

SplitInstance split(const SpanningFamily& a, const WeightVector& c,
                    const std::vector<int>& j_subset, double tol = kEqTol);

enum class Reducibility { kTotallyReducible, kNotTotallyReducible };

struct Block {
  std::vector<int> indices;  // original column indices
  linops::Subspace space;    // span of those columns in R^n
};

struct ReducibilityReport {
  Reducibility status = Reducibility::kNotTotallyReducible;
  std::vector<int> zero_block;  // indices with c_j <= tol
  std::vector<Block> blocks;
  // For the negative case: a minimal critical subset whose span and the
  // complementary span fail to be a direct sum.
  std::optional<std::vector<int>> certificate;
  // True when some minimal critical subset failed directness but another
  // choice succeeded (records that the peeling order mattered).
  bool choice_order_mattered = false;

  bool totally_reducible() const {
    return status == Reducibility::kTotallyReducible;
  }
};

ReducibilityReport total_reducibility(const SpanningFamily& a,
                                      const WeightVector& c,
                                      double tol = kEqTol);

// True iff the columns admit a nontrivial bipartition whose span dimensions
// sum to n (exhaustive search, m <= kMaxBipartition).
bool is_reducible_spanning_set(const SpanningFamily& a);

}  // namespace blsub::family

#endif  // BLSUB_FAMILY_HPP_
