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

#include "blsub/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace blsub::family {

namespace {

// Relative residual threshold for the incremental Gram-Schmidt rank used by
// the subset sweeps. Reported subsets get their dimension confirmed by SVD.
constexpr double kIndepTol = 1e-8;

constexpr long kWorkingCap = 65536;

std::string subset_str(const std::vector<int>& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i] + 1);
  }
  out += "}";
  return out;
}

// Depth-first sweep over all nonempty subsets in increasing-index order,
// carrying an orthonormal basis of the current span. The visitor receives
// (indices, weight_sum, rank). Rank growth is re-checked with one extra
// orthogonalization pass.
template <typename Visit>
void for_each_nonempty_subset(const Mat& cols, const Vec& c, Visit&& visit) {
  const int n = static_cast<int>(cols.rows());
  const int m = static_cast<int>(cols.cols());
  Mat basis(n, std::min(n, m));
  std::vector<int> chosen;
  chosen.reserve(m);

  auto rec = [&](auto&& self, int start, int rank, double wsum) -> void {
    for (int j = start; j < m; ++j) {
      int new_rank = rank;
      if (rank < n) {
        Vec v = cols.col(j);
        const double norm0 = v.norm();
        for (int pass = 0; pass < 2; ++pass) {
          for (int k = 0; k < rank; ++k) {
            v -= basis.col(k).dot(v) * basis.col(k);
          }
        }
        const double res = v.norm();
        if (res > kIndepTol * norm0) {
          basis.col(rank) = v / res;
          new_rank = rank + 1;
        }
      }
      chosen.push_back(j);
      const double w = wsum + c(j);
      visit(chosen, w, new_rank);
      self(self, j + 1, new_rank, w);
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0, 0.0);
}

bool subset_order(const SubsetRecord& a, const SubsetRecord& b) {
  if (a.indices.size() != b.indices.size()) {
    return a.indices.size() < b.indices.size();
  }
  return a.indices < b.indices;
}

void require_enum_capacity(int m, int cap, const char* op) {
  if (m > cap) {
    throw CapacityError(std::string(op) + ": m = " + std::to_string(m) +
                        " exceeds the exponential enumeration envelope (" +
                        std::to_string(cap) + ")");
  }
}

}  // namespace

SpanningFamily::SpanningFamily(Mat columns) : columns_(std::move(columns)) {
  if (columns_.size() == 0) {
    throw InputError("SpanningFamily: empty column matrix");
  }
  if (!linops::all_finite(columns_)) {
    throw InputError("SpanningFamily: non-finite entries");
  }
  for (int j = 0; j < m(); ++j) {
    if (columns_.col(j).norm() == 0.0) {
      throw InputError("SpanningFamily: column " + std::to_string(j + 1) + " is zero");
    }
  }
  if (linops::rank_tol(columns_) < n()) {
    throw InputError("SpanningFamily: columns do not span the ambient space");
  }
}

Mat SpanningFamily::submatrix(const std::vector<int>& indices) const {
  Mat out(n(), static_cast<int>(indices.size()));
  for (size_t k = 0; k < indices.size(); ++k) {
    out.col(static_cast<int>(k)) = columns_.col(indices[k]);
  }
  return out;
}

WeightVector::WeightVector(Vec c) : c_(std::move(c)) {
  if (c_.size() == 0) {
    throw InputError("WeightVector: empty");
  }
  if (!c_.allFinite()) {
    throw InputError("WeightVector: non-finite entries");
  }
  for (Eigen::Index j = 0; j < c_.size(); ++j) {
    if (c_(j) < -1e-12 || c_(j) > 1.0 + 1e-12) {
      throw InputError("WeightVector: c_" + std::to_string(j + 1) + " = " +
                       std::to_string(c_(j)) + " outside [0,1]");
    }
    c_(j) = std::clamp(c_(j), 0.0, 1.0);
  }
}

Vec WeightVector::subvector(const std::vector<int>& indices) const {
  Vec out(static_cast<int>(indices.size()));
  for (size_t k = 0; k < indices.size(); ++k) {
    out(static_cast<int>(k)) = c_(indices[k]);
  }
  return out;
}

FeasibilityReport feasibility(const SpanningFamily& a, const WeightVector& c,
                              double tol) {
  if (c.size() != a.m()) {
    throw InputError("feasibility: weight count does not match family size");
  }
  require_enum_capacity(a.m(), kMaxSubsetEnum, "feasibility");

  FeasibilityReport rep;
  rep.sum_c = c.sum();
  rep.sum_matches = std::abs(rep.sum_c - a.n()) <= tol;

  std::vector<SubsetRecord> violations;
  std::vector<SubsetRecord> critical;
  const int m = a.m();

  for_each_nonempty_subset(
      a.columns(), c.values(), [&](const std::vector<int>& s, double w, int rank) {
        if (w > rank + tol) {
          ++rep.n_violations_total;
          if (static_cast<long>(violations.size()) < kWorkingCap) {
            violations.push_back({s, w, rank});
          }
        } else if (static_cast<int>(s.size()) < m && std::abs(w - rank) <= tol) {
          ++rep.n_critical_total;
          if (static_cast<long>(critical.size()) < kWorkingCap) {
            critical.push_back({s, w, rank});
          }
        }
      });

  // Reported subsets get an exact SVD dimension; reclassify if it moved.
  auto confirm = [&](std::vector<SubsetRecord>& list, bool want_violation) {
    std::vector<SubsetRecord> kept;
    kept.reserve(list.size());
    for (auto& rec : list) {
      const int dim = linops::rank_tol(a.submatrix(rec.indices));
      if (dim != rec.dim) {
        const bool is_viol = rec.weight_sum > dim + tol;
        const bool is_crit = static_cast<int>(rec.indices.size()) < m &&
                             std::abs(rec.weight_sum - dim) <= tol;
        if (want_violation && !is_viol) {
          --rep.n_violations_total;
          if (is_crit) {
            ++rep.n_critical_total;
            critical.push_back({rec.indices, rec.weight_sum, dim});
          }
          continue;
        }
        if (!want_violation && !is_crit) {
          --rep.n_critical_total;
          if (is_viol) {
            ++rep.n_violations_total;
            violations.push_back({rec.indices, rec.weight_sum, dim});
          }
          continue;
        }
        rec.dim = dim;
      }
      kept.push_back(std::move(rec));
    }
    list = std::move(kept);
  };
  confirm(violations, true);
  confirm(critical, false);

  std::sort(violations.begin(), violations.end(), subset_order);
  std::sort(critical.begin(), critical.end(), subset_order);
  if (static_cast<int>(violations.size()) > FeasibilityReport::kReportCap) {
    violations.resize(FeasibilityReport::kReportCap);
  }
  if (static_cast<int>(critical.size()) > FeasibilityReport::kReportCap) {
    critical.resize(FeasibilityReport::kReportCap);
  }
  rep.violations = std::move(violations);
  rep.critical = std::move(critical);

  rep.in_KA = rep.sum_matches && rep.n_violations_total == 0;
  rep.in_interior = rep.in_KA && rep.n_critical_total == 0;
  return rep;
}

std::vector<std::vector<int>> minimal_critical(const SpanningFamily& a,
                                               const WeightVector& c,
                                               double tol) {
  const FeasibilityReport rep = feasibility(a, c, tol);
  if (!rep.in_KA) {
    throw InfeasibleError("minimal_critical: c lies outside the feasibility polytope");
  }
  if (rep.in_interior) {
    throw LogicError("minimal_critical: no critical subset (c is interior)");
  }

  int best = std::numeric_limits<int>::max();
  std::vector<std::vector<int>> hits;
  const int m = a.m();
  // Rank decisions on candidates are confirmed with SVD before acceptance.
  for_each_nonempty_subset(
      a.columns(), c.values(), [&](const std::vector<int>& s, double w, int rank) {
        const int k = static_cast<int>(s.size());
        if (k > best || k >= m) return;
        if (std::abs(w - rank) > tol) return;
        const int dim = linops::rank_tol(a.submatrix(s));
        if (std::abs(w - dim) > tol) return;
        if (k < best) {
          best = k;
          hits.clear();
        }
        hits.push_back(s);
      });
  if (hits.empty()) {
    throw NumericError("minimal_critical: boundary instance but no critical subset found; "
                       "rank tolerances are ambiguous for this input");
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

SplitInstance split(const SpanningFamily& a, const WeightVector& c,
                    const std::vector<int>& j_subset, double tol) {
  const int m = a.m();
  if (c.size() != m) {
    throw InputError("split: weight count does not match family size");
  }
  std::vector<int> j_sorted = j_subset;
  std::sort(j_sorted.begin(), j_sorted.end());
  j_sorted.erase(std::unique(j_sorted.begin(), j_sorted.end()), j_sorted.end());
  if (j_sorted.size() != j_subset.size()) {
    throw InputError("split: subset has repeated indices");
  }
  if (j_sorted.empty() || static_cast<int>(j_sorted.size()) >= m) {
    throw InputError("split: subset must be proper and nonempty");
  }
  if (j_sorted.front() < 0 || j_sorted.back() >= m) {
    throw InputError("split: subset index out of range");
  }
  for (int j = 0; j < m; ++j) {
    if (c[j] <= tol) {
      throw InputError("split: weight " + std::to_string(j + 1) +
                       " is zero; remove zero-weight indices first");
    }
  }

  std::vector<int> complement_idx;
  complement_idx.reserve(m - j_sorted.size());
  {
    size_t p = 0;
    for (int j = 0; j < m; ++j) {
      if (p < j_sorted.size() && j_sorted[p] == j) {
        ++p;
      } else {
        complement_idx.push_back(j);
      }
    }
  }

  const Mat cols_j = a.submatrix(j_sorted);
  const linops::Subspace vj = linops::orthonormalize(cols_j);
  const double wsum_j = c.subvector(j_sorted).sum();
  if (std::abs(wsum_j - vj.dim()) > tol) {
    throw LogicError("split: subset " + subset_str(j_sorted) +
                     " does not achieve equality (weight sum " + std::to_string(wsum_j) +
                     ", dim " + std::to_string(vj.dim()) + ")");
  }
  if (vj.dim() >= a.n()) {
    throw LogicError("split: subset spans the whole space");
  }
  const linops::Subspace vperp = linops::complement(vj);

  Mat inner_cols = vj.basis.transpose() * cols_j;
  Mat outer_cols = vperp.basis.transpose() * a.submatrix(complement_idx);
  for (int k = 0; k < outer_cols.cols(); ++k) {
    const int j = complement_idx[k];
    if (outer_cols.col(k).norm() <= 1e-10 * a.column(j).norm()) {
      throw ConsistencyError("split: projected column " + std::to_string(j + 1) +
                             " vanishes although its weight is positive; the subset "
                             "cannot achieve equality for a feasible instance");
    }
  }

  SplitInstance out{
      SpanningFamily(std::move(inner_cols)),
      WeightVector(c.subvector(j_sorted)),
      j_sorted,
      vj.basis,
      SpanningFamily(std::move(outer_cols)),
      WeightVector(c.subvector(complement_idx)),
      complement_idx,
      vperp.basis,
  };
  return out;
}

namespace {

std::vector<int> pick(const std::vector<int>& from, const std::vector<int>& at) {
  std::vector<int> out;
  out.reserve(at.size());
  for (int k : at) out.push_back(from[k]);
  return out;
}

// Recursive peeling with backtracking over all minimal critical subsets.
// `lift` maps local coordinates back to R^n; `idx` carries original labels.
std::optional<std::vector<Block>> peel(const Mat& lift, const std::vector<int>& idx,
                                       const Mat& cols, const Vec& w, double tol,
                                       bool& order_mattered,
                                       std::optional<std::vector<int>>& certificate) {
  const SpanningFamily fam(cols);
  const WeightVector wv(w);
  const FeasibilityReport rep = feasibility(fam, wv, tol);
  if (!rep.in_KA) {
    throw ConsistencyError("total_reducibility: sub-instance left the polytope");
  }
  if (rep.in_interior) {
    std::vector<Block> one;
    one.push_back({idx, linops::Subspace{lift}});
    return one;
  }

  const auto minimal = minimal_critical(fam, wv, tol);
  const int d = fam.n();
  bool any_failed = false;
  for (const auto& local_j : minimal) {
    std::vector<int> local_jc;
    {
      size_t p = 0;
      for (int k = 0; k < fam.m(); ++k) {
        if (p < local_j.size() && local_j[p] == k) {
          ++p;
        } else {
          local_jc.push_back(k);
        }
      }
    }
    const linops::Subspace vj = linops::orthonormalize(fam.submatrix(local_j));
    const linops::Subspace vjc = linops::orthonormalize(fam.submatrix(local_jc));
    if (vj.dim() + vjc.dim() != d) {
      if (!certificate) certificate = pick(idx, local_j);
      any_failed = true;
      continue;
    }
    auto left = peel(lift * vj.basis, pick(idx, local_j),
                     vj.basis.transpose() * fam.submatrix(local_j),
                     wv.subvector(local_j), tol, order_mattered, certificate);
    if (!left) {
      any_failed = true;
      continue;
    }
    auto right = peel(lift * vjc.basis, pick(idx, local_jc),
                      vjc.basis.transpose() * fam.submatrix(local_jc),
                      wv.subvector(local_jc), tol, order_mattered, certificate);
    if (!right) {
      any_failed = true;
      continue;
    }
    if (any_failed) order_mattered = true;
    left->insert(left->end(), std::make_move_iterator(right->begin()),
                 std::make_move_iterator(right->end()));
    return left;
  }
  return std::nullopt;
}

}  // namespace

ReducibilityReport total_reducibility(const SpanningFamily& a, const WeightVector& c,
                                      double tol) {
  const FeasibilityReport rep = feasibility(a, c, tol);
  if (!rep.in_KA) {
    throw InfeasibleError("total_reducibility: c lies outside the feasibility polytope");
  }

  ReducibilityReport out;
  std::vector<int> nonzero;
  for (int j = 0; j < a.m(); ++j) {
    if (c[j] <= tol) {
      out.zero_block.push_back(j);
    } else {
      nonzero.push_back(j);
    }
  }
  if (nonzero.empty()) {
    throw ConsistencyError("total_reducibility: all weights are zero on a feasible instance");
  }

  Mat cols = a.submatrix(nonzero);
  if (linops::rank_tol(cols) < a.n()) {
    throw ConsistencyError(
        "total_reducibility: nonzero-weight columns fail to span although c is feasible");
  }
  Mat lift = Mat::Identity(a.n(), a.n());
  auto blocks = peel(lift, nonzero, cols, c.subvector(nonzero), tol,
                     out.choice_order_mattered, out.certificate);
  if (blocks) {
    std::sort(blocks->begin(), blocks->end(), [](const Block& x, const Block& y) {
      return x.indices.front() < y.indices.front();
    });
    out.status = Reducibility::kTotallyReducible;
    out.blocks = std::move(*blocks);
    out.certificate.reset();
  } else {
    out.status = Reducibility::kNotTotallyReducible;
  }
  return out;
}

bool is_reducible_spanning_set(const SpanningFamily& a) {
  const int m = a.m();
  const int n = a.n();
  require_enum_capacity(m, kMaxBipartition, "is_reducible_spanning_set");
  if (m < 2) return false;

  const Mat& cols = a.columns();
  Mat basis1(n, n), basis2(n, n);

  // Assign columns one by one to the two groups; dims only ever grow, so any
  // partial assignment with dim sum above n is dead.
  auto rec = [&](auto&& self, int j, int r1, int r2, bool g2_nonempty) -> bool {
    if (r1 + r2 > n) return false;
    if (j == m) return g2_nonempty && (r1 + r2 == n);
    Vec v = cols.col(j);
    const double norm0 = v.norm();

    auto residual_rank = [&](Mat& basis, int r) -> std::pair<bool, Vec> {
      Vec u = v;
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < r; ++k) u -= basis.col(k).dot(u) * basis.col(k);
      }
      const double res = u.norm();
      if (res > kIndepTol * norm0) return {true, u / res};
      return {false, Vec()};
    };

    {
      auto [grew, q] = residual_rank(basis1, r1);
      if (grew) basis1.col(r1) = q;
      if (self(self, j + 1, r1 + (grew ? 1 : 0), r2, g2_nonempty)) return true;
    }
    if (j > 0) {  // fix column 0 in group 1 to break the symmetry
      auto [grew, q] = residual_rank(basis2, r2);
      if (grew) basis2.col(r2) = q;
      if (self(self, j + 1, r1, r2 + (grew ? 1 : 0), true)) return true;
    }
    return false;
  };
  return rec(rec, 0, 0, 0, false);
}

}  // namespace blsub::family
