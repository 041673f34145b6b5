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

#include "blsub/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace blsub::entropy {

namespace {

constexpr double kPositivityFloor = 1e-300;

// Walks all cells in row-major order, handing the visitor the flat index and
// the cell center.
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

void check_frame(const Mat& u, const Vec& c, const char* op) {
  const int n = static_cast<int>(u.rows());
  if (c.size() != u.cols()) {
    throw InputError(std::string(op) + ": weight count does not match the family size");
  }
  for (int j = 0; j < u.cols(); ++j) {
    if (std::abs(u.col(j).norm() - 1.0) > 1e-9) {
      throw PreconditionError(std::string(op) + ": column " + std::to_string(j + 1) +
                              " is not a unit vector");
    }
  }
  Mat acc = Mat::Zero(n, n);
  for (int j = 0; j < u.cols(); ++j) {
    acc += c(j) * u.col(j) * u.col(j).transpose();
  }
  acc -= Mat::Identity(n, n);
  if (acc.cwiseAbs().maxCoeff() > 1e-9) {
    throw PreconditionError(std::string(op) +
                            ": the weighted family does not decompose the identity "
                            "(residual " + std::to_string(acc.cwiseAbs().maxCoeff()) + ")");
  }
}

}  // namespace

DensityGrid DensityGrid::validated(grid::Grid g, double mass_tol, double boundary_tol) {
  g.check_structure("DensityGrid");
  for (double v : g.values) {
    if (v < 0.0) {
      throw InputError("DensityGrid: negative density value");
    }
  }
  const double mass = g.mass();
  if (std::abs(mass - 1.0) > mass_tol) {
    throw InputError("DensityGrid: Riemann mass " + std::to_string(mass) +
                     " deviates from 1 beyond the tolerance");
  }
  const double edge = g.boundary_mass();
  if (edge > boundary_tol) {
    throw InputError("DensityGrid: boundary-cell mass " + std::to_string(edge) +
                     " exceeds the tolerance; enlarge the box");
  }
  return DensityGrid(std::move(g));
}

double entropy(const DensityGrid& f) {
  double acc = 0.0;
  for (double v : f.g().values) {
    if (v > 0.0) acc += v * std::log(v);
  }
  return acc * f.g().cell_volume();
}

MarginalGrid marginal(const DensityGrid& f, const Vec& a, int min_bins) {
  const grid::Grid& g = f.g();
  if (a.size() != g.dim) {
    throw InputError("marginal: direction dimension does not match the grid");
  }
  if (a.norm() == 0.0) {
    throw InputError("marginal: zero direction");
  }

  double pmin = 0.0, pmax = 0.0, wcell = 0.0;
  for (int d = 0; d < g.dim; ++d) {
    const double c0 = a(d) * g.axes[d].center(0);
    const double c1 = a(d) * g.axes[d].center(g.axes[d].count - 1);
    pmin += std::min(c0, c1);
    pmax += std::max(c0, c1);
    wcell = std::max(wcell, std::abs(a(d)) * g.axes[d].spacing());
  }
  const double range = pmax - pmin;
  const double w = std::max(wcell, range / min_bins);
  // Bin centers sit on the projected lattice (pmin lands at the center of
  // bin 2); for axis-aligned directions the pushforward is then exact.
  const double lo = pmin - 2.5 * w;
  const int count = static_cast<int>(std::ceil((pmax - lo) / w)) + 3;

  std::vector<double> bins(count, 0.0);
  const double vol = g.cell_volume();
  for_each_cell(g, [&](std::size_t idx, const Vec& x) {
    const double v = g.values[idx];
    if (v == 0.0) return;
    int k = static_cast<int>((a.dot(x) - lo) / w);
    k = std::clamp(k, 0, count - 1);
    bins[k] += v * vol;
  });

  grid::Grid out;
  out.dim = 1;
  out.axes[0] = grid::Axis{lo, lo + count * w, count};
  out.values.resize(count);
  for (int k = 0; k < count; ++k) {
    out.values[k] = bins[k] / w;
  }
  return MarginalGrid{DensityGrid::validated(std::move(out)), a};
}

double fisher(const DensityGrid& f, FisherDiagnostics* diag) {
  const grid::Grid& g = f.g();
  const int n0 = g.axes[0].count;
  const int n1 = g.dim > 1 ? g.axes[1].count : 1;
  const int n2 = g.dim > 2 ? g.axes[2].count : 1;
  const double vol = g.cell_volume();

  double acc = 0.0;
  long floored = 0;
  auto value = [&](int i, int j, int k) -> double {
    if (i < 0 || i >= n0 || j < 0 || j >= n1 || k < 0 || k >= n2) return 0.0;
    return g.values[g.index(i, j, k)];
  };
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      for (int k = 0; k < n2; ++k) {
        const double v = value(i, j, k);
        if (v < kPositivityFloor) {
          if (v >= 0.0) ++floored;
          continue;
        }
        double grad2 = 0.0;
        {
          const double d = (value(i + 1, j, k) - value(i - 1, j, k)) / (2.0 * g.axes[0].spacing());
          grad2 += d * d;
        }
        if (g.dim > 1) {
          const double d = (value(i, j + 1, k) - value(i, j - 1, k)) / (2.0 * g.axes[1].spacing());
          grad2 += d * d;
        }
        if (g.dim > 2) {
          const double d = (value(i, j, k + 1) - value(i, j, k - 1)) / (2.0 * g.axes[2].spacing());
          grad2 += d * d;
        }
        acc += grad2 / v;
      }
    }
  }
  if (diag) {
    diag->floored_cells = floored;
    // Flag zero runs strictly inside the support along the first axis.
    diag->interior_zero_region = false;
    for (int j = 0; j < n1 && !diag->interior_zero_region; ++j) {
      for (int k = 0; k < n2 && !diag->interior_zero_region; ++k) {
        int first = -1, last = -1;
        for (int i = 0; i < n0; ++i) {
          if (value(i, j, k) >= kPositivityFloor) {
            if (first < 0) first = i;
            last = i;
          }
        }
        int run = 0;
        for (int i = first; i >= 0 && i <= last; ++i) {
          run = value(i, j, k) < kPositivityFloor ? run + 1 : 0;
          if (run > 1) {
            diag->interior_zero_region = true;
            break;
          }
        }
      }
    }
  }
  return acc * vol;
}

namespace {

// Convolution with a normalized sampled-Gaussian kernel along one axis,
// zero-padded at the walls.
void convolve_axis(grid::Grid& g, int axis, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  const int n0 = g.axes[0].count;
  const int n1 = g.dim > 1 ? g.axes[1].count : 1;
  const int n2 = g.dim > 2 ? g.axes[2].count : 1;
  std::vector<double> line;
  std::vector<double> out_line;

  auto run_line = [&](auto&& get, auto&& set, int len) {
    line.resize(len);
    out_line.assign(len, 0.0);
    for (int i = 0; i < len; ++i) line[i] = get(i);
    for (int i = 0; i < len; ++i) {
      double acc = 0.0;
      const int kmin = std::max(-radius, i - (len - 1));
      const int kmax = std::min(radius, i);
      for (int k = kmin; k <= kmax; ++k) {
        acc += kernel[static_cast<std::size_t>(k + radius)] * line[i - k];
      }
      out_line[i] = acc;
    }
    for (int i = 0; i < len; ++i) set(i, out_line[i]);
  };

  if (axis == 0) {
    for (int j = 0; j < n1; ++j) {
      for (int k = 0; k < n2; ++k) {
        run_line([&](int i) { return g.values[g.index(i, j, k)]; },
                 [&](int i, double v) { g.values[g.index(i, j, k)] = v; }, n0);
      }
    }
  } else if (axis == 1) {
    for (int i = 0; i < n0; ++i) {
      for (int k = 0; k < n2; ++k) {
        run_line([&](int j) { return g.values[g.index(i, j, k)]; },
                 [&](int j, double v) { g.values[g.index(i, j, k)] = v; }, n1);
      }
    }
  } else {
    for (int i = 0; i < n0; ++i) {
      for (int j = 0; j < n1; ++j) {
        run_line([&](int k) { return g.values[g.index(i, j, k)]; },
                 [&](int k, double v) { g.values[g.index(i, j, k)] = v; }, n2);
      }
    }
  }
}

}  // namespace

DensityGrid heat_step(const DensityGrid& f, double tau) {
  if (!(tau > 0.0)) {
    throw InputError("heat_step: tau must be positive");
  }
  grid::Grid g = f.g();
  const double sigma = std::sqrt(2.0 * tau);
  for (int d = 0; d < g.dim; ++d) {
    const double h = g.axes[d].spacing();
    const int radius = static_cast<int>(std::ceil(8.0 * sigma / h));
    if (radius == 0) continue;  // kernel narrower than a cell: identity
    if (2 * radius + 1 > g.axes[d].count) {
      throw InputError("heat_step: heat kernel (radius " + std::to_string(radius) +
                       " cells) does not fit inside axis " + std::to_string(d + 1) +
                       "; enlarge the box");
    }
    std::vector<double> kernel(2 * radius + 1);
    double norm = 0.0;
    for (int k = -radius; k <= radius; ++k) {
      const double v = std::exp(-(k * h) * (k * h) / (4.0 * tau));
      kernel[static_cast<std::size_t>(k + radius)] = v;
      norm += v;
    }
    for (double& v : kernel) v /= norm;
    convolve_axis(g, d, kernel);
  }
  const double drift = std::abs(g.mass() - f.g().mass());
  if (drift > 1e-9) {
    throw AccuracyError("heat_step: mass drifted by " + std::to_string(drift) +
                        "; the box is too small for this flow time");
  }
  try {
    return DensityGrid::validated(std::move(g));
  } catch (const InputError& e) {
    throw AccuracyError(std::string("heat_step: ") + e.what());
  }
}

double subadditivity_gap(const DensityGrid& f, const family::SpanningFamily& a,
                         const family::WeightVector& c) {
  if (a.n() != f.dim()) {
    throw InputError("subadditivity_gap: family dimension does not match the grid");
  }
  if (c.size() != a.m()) {
    throw InputError("subadditivity_gap: weight count does not match the family");
  }
  if (std::abs(c.sum() - a.n()) > 1e-9) {
    throw InputError("subadditivity_gap: weights must sum to the dimension");
  }
  double acc = -entropy(f);
  for (int j = 0; j < a.m(); ++j) {
    if (c[j] == 0.0) continue;
    acc += c[j] * entropy(marginal(f, a.column(j)).density);
  }
  return acc;
}

InfoCheck fisher_superadditivity_check(const Mat& sigma, const Mat& u, const Vec& c,
                                       double tol) {
  check_frame(u, c, "fisher_superadditivity_check");
  const int n = static_cast<int>(sigma.rows());
  Eigen::LLT<Mat> llt(sigma);
  if (sigma.rows() != sigma.cols() || llt.info() != Eigen::Success) {
    throw NumericError("fisher_superadditivity_check: covariance is not SPD");
  }
  InfoCheck out;
  for (int j = 0; j < u.cols(); ++j) {
    out.lhs += c(j) / u.col(j).dot(sigma * u.col(j));
  }
  out.rhs = llt.solve(Mat::Identity(n, n)).trace();
  out.holds = out.lhs <= out.rhs + tol;
  return out;
}

InfoCheck fisher_superadditivity_check(const DensityGrid& f, const Mat& u, const Vec& c,
                                       double tol) {
  check_frame(u, c, "fisher_superadditivity_check");
  if (u.rows() != f.dim()) {
    throw InputError("fisher_superadditivity_check: direction dimension mismatch");
  }
  InfoCheck out;
  for (int j = 0; j < u.cols(); ++j) {
    out.lhs += c(j) * fisher(marginal(f, u.col(j)).density);
  }
  out.rhs = fisher(f);
  out.holds = out.lhs <= out.rhs + tol;
  return out;
}

std::vector<ScanPoint> heat_monotonicity_scan(const DensityGrid& f, const Mat& u,
                                              const Vec& c,
                                              const std::vector<double>& times) {
  check_frame(u, c, "heat_monotonicity_scan");
  if (f.dim() != 2) {
    throw InputError("heat_monotonicity_scan: only 2-dim densities are supported");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] <= times[i - 1])) {
      throw InputError("heat_monotonicity_scan: times must be nonnegative and ascending");
    }
  }

  std::vector<ScanPoint> out;
  out.reserve(times.size());
  DensityGrid current = f;
  double reached = 0.0;
  for (double t : times) {
    if (t > reached) {
      current = heat_step(current, t - reached);
      reached = t;
    }
    ScanPoint pt;
    pt.t = t;
    pt.info_gap = fisher(current);
    for (int j = 0; j < u.cols(); ++j) {
      pt.info_gap -= c(j) * fisher(marginal(current, u.col(j)).density);
    }
    out.push_back(pt);
  }
  return out;
}

DensityGrid gaussian_density(const Mat& cov, const Vec& mean,
                             const std::array<grid::Axis, 3>& axes, int dim) {
  if (cov.rows() != dim || cov.cols() != dim || mean.size() != dim) {
    throw InputError("gaussian_density: dimension mismatch");
  }
  Eigen::LLT<Mat> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericError("gaussian_density: covariance is not SPD");
  }
  grid::Grid g = grid::make_grid(dim, axes);
  const double lognorm = -0.5 * dim * std::log(2.0 * std::numbers::pi) -
                         0.5 * linops::logdet_pd(cov);
  for_each_cell(g, [&](std::size_t idx, const Vec& x) {
    const Vec d = x - mean;
    const double q = d.dot(llt.solve(d));
    g.values[idx] = std::exp(lognorm - 0.5 * q);
  });
  const double mass = g.mass();
  for (double& v : g.values) v /= mass;
  return DensityGrid::validated(std::move(g));
}

DensityGrid mixture_density(const std::vector<MixtureComponent>& components,
                            const std::array<grid::Axis, 3>& axes, int dim) {
  if (components.empty()) {
    throw InputError("mixture_density: no components");
  }
  grid::Grid g = grid::make_grid(dim, axes);
  double wsum = 0.0;
  for (const auto& comp : components) {
    if (!(comp.weight > 0.0)) {
      throw InputError("mixture_density: component weights must be positive");
    }
    wsum += comp.weight;
  }
  for (const auto& comp : components) {
    const DensityGrid part = gaussian_density(comp.cov, comp.mean, axes, dim);
    const double w = comp.weight / wsum;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      g.values[i] += w * part.g().values[i];
    }
  }
  const double mass = g.mass();
  for (double& v : g.values) v /= mass;
  return DensityGrid::validated(std::move(g));
}

}  // namespace blsub::entropy
