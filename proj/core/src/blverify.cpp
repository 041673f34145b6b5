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

#include "blsub/blverify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blsub/gaussopt.hpp"

namespace blsub::blverify {

namespace {

template <typename Visit>
void for_each_cell(const grid::Grid& g, Visit&& visit) {
  const int n0 = g.axes[0].count;
  const int n1 = g.dim > 1 ? g.axes[1].count : 1;
  const int n2 = g.dim > 2 ? g.axes[2].count : 1;
  Vec x(g.dim);
  std::size_t idx = 0;
  for (int i = 0; i < n0; ++i) {
    x(0) = g.axes[0].center(i);
    for (int j = 0; j < n1; ++j) {
      if (g.dim > 1) x(1) = g.axes[1].center(j);
      for (int k = 0; k < n2; ++k, ++idx) {
        if (g.dim > 2) x(2) = g.axes[2].center(k);
        visit(idx, x);
      }
    }
  }
}

void check_factors(const family::SpanningFamily& a, const FactorSet& factors,
                   const char* op) {
  if (static_cast<int>(factors.factors.size()) != a.m()) {
    throw InputError(std::string(op) + ": need one factor per column (" +
                     std::to_string(a.m()) + ")");
  }
  for (std::size_t j = 0; j < factors.factors.size(); ++j) {
    const grid::Grid& f = factors.factors[j];
    f.check_structure(op);
    if (f.dim != 1) {
      throw InputError(std::string(op) + ": factor " + std::to_string(j + 1) +
                       " is not one-dimensional");
    }
  }
}

grid::Grid domain_grid(const GridSpec& spec) {
  return grid::make_grid(spec.dim, spec.axes);
}

// int f^{1/c} over the factor's own grid, with the 0^{1/c} = 0 convention.
double power_integral(const grid::Grid& f, double inv_c) {
  double acc = 0.0;
  for (double v : f.values) {
    if (v > 0.0) acc += std::pow(v, inv_c);
  }
  return acc * f.axes[0].spacing();
}

}  // namespace

GridSpec default_domain(const family::SpanningFamily& a, const FactorSet& factors,
                        int cells_per_axis) {
  check_factors(a, factors, "default_domain");
  double half = std::numeric_limits<double>::infinity();
  for (int j = 0; j < a.m(); ++j) {
    const grid::Axis& ax = factors.factors[j].axes[0];
    const double reach = std::min(-ax.lo, ax.hi);
    if (!(reach > 0.0)) {
      throw InputError("default_domain: factor " + std::to_string(j + 1) +
                       " does not straddle the origin");
    }
    half = std::min(half, reach / a.column(j).template lpNorm<1>());
  }
  GridSpec spec;
  spec.dim = a.n();
  for (int d = 0; d < a.n(); ++d) {
    spec.axes[d] = grid::Axis{-half, half, cells_per_axis};
  }
  return spec;
}

double bl_lhs(const family::SpanningFamily& a, const FactorSet& factors,
              const GridSpec& domain) {
  check_factors(a, factors, "bl_lhs");
  if (domain.dim != a.n() || a.n() > 3) {
    throw InputError("bl_lhs: domain dimension must match the family (n <= 3)");
  }
  grid::Grid g = domain_grid(domain);

  double total = 0.0;
  double shell = 0.0;
  const int n0 = g.axes[0].count;
  const int n1 = g.dim > 1 ? g.axes[1].count : 1;
  const int n2 = g.dim > 2 ? g.axes[2].count : 1;
  for_each_cell(g, [&](std::size_t idx, const Vec& x) {
    double p = 1.0;
    for (int j = 0; j < a.m() && p != 0.0; ++j) {
      p *= grid::interp1(factors.factors[j], a.column(j).dot(x));
    }
    if (p == 0.0) return;
    total += p;
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(n1) * n2));
    const int jj = static_cast<int>((idx / n2) % n1);
    const int kk = static_cast<int>(idx % n2);
    const bool edge = i == 0 || i == n0 - 1 || (g.dim > 1 && (jj == 0 || jj == n1 - 1)) ||
                      (g.dim > 2 && (kk == 0 || kk == n2 - 1));
    if (edge) shell += p;
  });
  if (total > 0.0 && shell > 1e-4 * total) {
    throw AccuracyError("bl_lhs: boundary cells contribute " + std::to_string(shell / total) +
                        " of the integral; the truncated box dominates the error");
  }
  return total * g.cell_volume();
}

BLReport bl_check(const family::SpanningFamily& a, const family::WeightVector& c,
                  const FactorSet& factors, const GridSpec& domain, double tol) {
  check_factors(a, factors, "bl_check");
  const gaussopt::ConstantReport rep = gaussopt::constant(a, c);
  if (!rep.finite()) {
    throw InfeasibleError("bl_check: D(A,c) is infinite for this instance");
  }

  BLReport out;
  out.tol = tol;
  out.lhs = bl_lhs(a, factors, domain);
  double log_rhs = rep.D;
  for (int j = 0; j < a.m(); ++j) {
    if (c[j] == 0.0) {
      // A zero exponent turns the factor into a sup bound; outside scope of
      // the grid checks, so require positive weights here.
      throw InputError("bl_check: zero weights are not supported on the grid path");
    }
    const double integral = power_integral(factors.factors[j], 1.0 / c[j]);
    if (integral == 0.0) {
      out.rhs = 0.0;
      out.ratio = out.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      out.holds = out.lhs == 0.0;
      out.verdict = out.holds ? Verdict::kHolds : Verdict::kViolatedNumerical;
      return out;
    }
    log_rhs += c[j] * std::log(integral);
  }
  out.rhs = std::exp(log_rhs);
  out.ratio = out.lhs / out.rhs;
  out.holds = out.ratio <= 1.0 + tol;
  if (std::abs(out.ratio - 1.0) <= tol) {
    out.verdict = Verdict::kEquality;
  } else if (out.ratio < 1.0) {
    out.verdict = Verdict::kHolds;
  } else if (out.ratio <= 1.0 + 10.0 * tol) {
    // The inequality is a theorem; an excess below ten budgets is noise.
    out.verdict = Verdict::kInconclusive;
  } else {
    out.verdict = Verdict::kViolatedNumerical;
  }
  return out;
}

entropy::DensityGrid duality_density(const family::SpanningFamily& a,
                                     const family::WeightVector& c,
                                     const FactorSet& log_factors,
                                     const GridSpec& domain) {
  check_factors(a, log_factors, "duality_density");
  if (domain.dim != a.n()) {
    throw InputError("duality_density: domain dimension mismatch");
  }
  grid::Grid g = domain_grid(domain);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<double> logs(g.size(), 0.0);
  double log_max = kNegInf;
  for_each_cell(g, [&](std::size_t idx, const Vec& x) {
    double acc = 0.0;
    for (int j = 0; j < a.m(); ++j) {
      const double t = a.column(j).dot(x);
      const grid::Axis& ax = log_factors.factors[j].axes[0];
      if (t < ax.center(0) || t > ax.center(ax.count - 1)) {
        acc = kNegInf;  // exponent unsampled: treat e^phi as zero
        break;
      }
      acc += c[j] * grid::interp1_strict(log_factors.factors[j], t, "duality_density");
    }
    logs[idx] = acc;
    log_max = std::max(log_max, acc);
  });
  if (!std::isfinite(log_max)) {
    throw AccuracyError("duality_density: exp(phi) vanishes on the whole domain");
  }
  for (std::size_t i = 0; i < logs.size(); ++i) {
    g.values[i] = logs[i] == kNegInf ? 0.0 : std::exp(logs[i] - log_max);
  }
  const double mass = g.mass();
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw AccuracyError("duality_density: exp(phi) is not integrable on this grid");
  }
  for (double& v : g.values) v /= mass;
  try {
    return entropy::DensityGrid::validated(std::move(g));
  } catch (const InputError& e) {
    throw AccuracyError(std::string("duality_density: ") + e.what() +
                        " (exp(phi) does not decay inside the box)");
  }
}

EqualityCorrespondence equality_correspondence(const family::SpanningFamily& a,
                                               const family::WeightVector& c,
                                               const entropy::DensityGrid& f) {
  if (a.n() != f.dim()) {
    throw InputError("equality_correspondence: family dimension does not match the grid");
  }
  const gaussopt::ConstantReport rep = gaussopt::constant(a, c);
  if (!rep.finite()) {
    throw InfeasibleError("equality_correspondence: D(A,c) is infinite");
  }

  std::vector<entropy::MarginalGrid> margins;
  margins.reserve(a.m());
  for (int j = 0; j < a.m(); ++j) {
    margins.push_back(entropy::marginal(f, a.column(j)));
  }

  // e^{-D} prod_j marginal_j(a_j . x)^{c_j} on f's own grid.
  grid::Grid prod = f.g();
  for_each_cell(f.g(), [&](std::size_t idx, const Vec& x) {
    double log_p = -rep.D;
    bool zero = false;
    for (int j = 0; j < a.m() && !zero; ++j) {
      const double v = grid::interp1(margins[j].density.g(), a.column(j).dot(x));
      if (v <= 0.0) {
        zero = true;
      } else {
        log_p += c[j] * std::log(v);
      }
    }
    prod.values[idx] = zero ? 0.0 : std::exp(log_p);
  });

  EqualityCorrespondence out;
  const double sup_f = *std::max_element(f.g().values.begin(), f.g().values.end());
  double sup_diff = 0.0;
  for (std::size_t i = 0; i < prod.values.size(); ++i) {
    sup_diff = std::max(sup_diff, std::abs(prod.values[i] - f.g().values[i]));
  }
  out.product_residual = sup_diff / sup_f;

  // Normalize the rebuilt function and compare its marginals to f's.
  const double mass = prod.mass();
  if (mass > 0.0) {
    for (double& v : prod.values) v /= mass;
    double worst = 0.0;
    for (int j = 0; j < a.m(); ++j) {
      const entropy::MarginalGrid rebuilt =
          entropy::marginal(entropy::DensityGrid::validated(prod, 1e-6, 1.0), a.column(j));
      const grid::Grid& mg = margins[j].density.g();
      const grid::Grid& rg = rebuilt.density.g();
      if (!grid::same_geometry(mg, rg)) {
        throw ConsistencyError("equality_correspondence: marginal grids diverged");
      }
      const double sup_m = *std::max_element(mg.values.begin(), mg.values.end());
      double diff = 0.0;
      for (std::size_t i = 0; i < mg.values.size(); ++i) {
        diff = std::max(diff, std::abs(mg.values[i] - rg.values[i]));
      }
      worst = std::max(worst, diff / sup_m);
    }
    out.marginal_match = worst;
  } else {
    out.marginal_match = 1.0;
  }
  return out;
}

}  // namespace blsub::blverify
