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

#include "blsub/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace blsub::spectral {

namespace {

constexpr double kPivMin = 1e-305;

void check_unit_frame(const Mat& u, const Vec& c, const char* op) {
  const int n = static_cast<int>(u.rows());
  if (c.size() != u.cols()) {
    throw InputError(std::string(op) + ": weight count does not match the family size");
  }
  for (int j = 0; j < u.cols(); ++j) {
    if (std::abs(u.col(j).norm() - 1.0) > 1e-9) {
      throw PreconditionError(std::string(op) + ": column " + std::to_string(j + 1) +
                              " is not a unit vector");
    }
    if (!(c(j) > 0.0)) {
      throw PreconditionError(std::string(op) + ": weights must be positive");
    }
  }
  Mat acc = Mat::Zero(n, n);
  for (int j = 0; j < u.cols(); ++j) {
    acc += c(j) * u.col(j) * u.col(j).transpose();
  }
  acc -= Mat::Identity(n, n);
  if (acc.cwiseAbs().maxCoeff() > 1e-9) {
    throw PreconditionError(std::string(op) + ": the weighted family does not decompose "
                            "the identity");
  }
}

// Eigenvalue count below x for a symmetric tridiagonal matrix (Sturm).
int sturm_count(const std::vector<double>& diag, double off, double x) {
  int count = 0;
  double q = 1.0;
  const double off2 = off * off;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    q = (diag[i] - x) - (i ? off2 / q : 0.0);
    if (std::abs(q) < kPivMin) q = q < 0.0 ? -kPivMin : kPivMin;
    if (q < 0.0) ++count;
  }
  return count;
}

// Thomas solve of (T - sigma) x = b for tridiagonal T with constant offdiag.
// The shift sits below the spectrum, so the pivots stay positive.
void shifted_tridiag_solve(const std::vector<double>& diag, double off, double sigma,
                           std::vector<double>& x, const std::vector<double>& b) {
  const std::size_t n = diag.size();
  static thread_local std::vector<double> cp, dp;
  cp.assign(n, 0.0);
  dp.assign(n, 0.0);
  double denom = diag[0] - sigma;
  if (std::abs(denom) < kPivMin) denom = kPivMin;
  cp[0] = off / denom;
  dp[0] = b[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = (diag[i] - sigma) - off * cp[i - 1];
    if (std::abs(denom) < kPivMin) denom = kPivMin;
    cp[i] = off / denom;
    dp[i] = (b[i] - off * dp[i - 1]) / denom;
  }
  x.assign(n, 0.0);
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = dp[i] - cp[i] * x[i + 1];
  }
}

void finish_ground_state(GroundState& gs, const grid::Grid& shape,
                         std::vector<double> phi, double theta, double residual,
                         const SpectralOptions& opts, const char* op) {
  // Sign-normalize to a nonnegative ground state, then L2-normalize with the
  // Riemann weight.
  double total = 0.0;
  for (double v : phi) total += v;
  if (total < 0.0) {
    for (double& v : phi) v = -v;
  }
  const double vol = shape.cell_volume();
  double norm2 = 0.0;
  for (double v : phi) norm2 += v * v;
  const double scale = 1.0 / std::sqrt(norm2 * vol);
  for (double& v : phi) v *= scale;

  double peak = 0.0;
  for (double v : phi) peak = std::max(peak, std::abs(v));
  double edge = 0.0;
  {
    grid::Grid tmp = shape;
    tmp.values = phi;
    const int n0 = tmp.axes[0].count;
    const int n1 = tmp.dim > 1 ? tmp.axes[1].count : 1;
    for (int i = 0; i < n0; ++i) {
      for (int j = 0; j < n1; ++j) {
        const bool on_edge = i == 0 || i == n0 - 1 || (tmp.dim > 1 && (j == 0 || j == n1 - 1));
        if (on_edge) edge = std::max(edge, std::abs(tmp.at(i, j)));
      }
    }
    gs.eigenfunction = std::move(tmp);
  }
  gs.boundary_ratio = edge / peak;
  gs.confined = gs.boundary_ratio < opts.boundary_tol;
  gs.lambda = -theta;
  gs.residual = residual;
  if (opts.strict_boundary && !gs.confined) {
    throw AccuracyError(std::string(op) + ": eigenfunction amplitude at the walls is " +
                        std::to_string(gs.boundary_ratio) +
                        " of its peak; enlarge the box");
  }
}

}  // namespace

void Potential::check(const char* op) const {
  g.check_structure(op);
  if (g.dim > 2) {
    throw InputError(std::string(op) + ": potentials are 1- or 2-dimensional");
  }
}

GroundState lambda_1d(const Potential& v, const SpectralOptions& opts) {
  v.check("lambda_1d");
  if (v.g.dim != 1) {
    throw InputError("lambda_1d: potential is not one-dimensional");
  }
  const int n = v.g.axes[0].count;
  const double h = v.g.axes[0].spacing();
  const double off = -4.0 / (h * h);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) {
    diag[i] = 8.0 / (h * h) - v.g.values[i];
  }

  double lo = diag[0], hi = diag[0];
  for (double d : diag) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  lo += 2.0 * off;  // off is negative
  hi -= 2.0 * off;
  const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
  const double eps = 1e-14 * scale;
  while (hi - lo > eps) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double mu = 0.5 * (lo + hi);

  // Inverse iteration from the all-ones vector with a shift just below mu.
  const double sigma = lo - 16.0 * eps;
  std::vector<double> phi(n, 1.0), next;
  double theta = mu;
  for (int pass = 0; pass < 4; ++pass) {
    shifted_tridiag_solve(diag, off, sigma, next, phi);
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : next) x /= norm;
    phi.swap(next);
  }
  // Rayleigh quotient and residual in the plain Euclidean sense.
  double ray = 0.0, res2 = 0.0;
  {
    std::vector<double> tphi(n);
    for (int i = 0; i < n; ++i) {
      double acc = diag[i] * phi[i];
      if (i > 0) acc += off * phi[i - 1];
      if (i + 1 < n) acc += off * phi[i + 1];
      tphi[i] = acc;
    }
    for (int i = 0; i < n; ++i) ray += phi[i] * tphi[i];
    for (int i = 0; i < n; ++i) {
      const double r = tphi[i] - ray * phi[i];
      res2 += r * r;
    }
  }
  theta = ray;

  GroundState gs;
  gs.iterations = 4;
  finish_ground_state(gs, v.g, std::move(phi), theta, std::sqrt(res2), opts, "lambda_1d");
  return gs;
}

GroundState lambda_2d(const Potential& v, const SpectralOptions& opts) {
  v.check("lambda_2d");
  if (v.g.dim != 2) {
    throw InputError("lambda_2d: potential is not two-dimensional");
  }
  const int nx = v.g.axes[0].count;
  const int ny = v.g.axes[1].count;
  if (static_cast<long>(nx) * ny > 256L * 256L) {
    throw CapacityError("lambda_2d: grid exceeds the 256x256 envelope");
  }
  const double hx = v.g.axes[0].spacing();
  const double hy = v.g.axes[1].spacing();
  const double cx = 4.0 / (hx * hx);
  const double cy = 4.0 / (hy * hy);
  const std::size_t total = static_cast<std::size_t>(nx) * ny;

  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * ny + j;
        double acc = (2.0 * cx + 2.0 * cy - v.g.values[idx]) * in[idx];
        if (i > 0) acc -= cx * in[idx - ny];
        if (i + 1 < nx) acc -= cx * in[idx + ny];
        if (j > 0) acc -= cy * in[idx - 1];
        if (j + 1 < ny) acc -= cy * in[idx + 1];
        out[idx] = acc;
      }
    }
  };

  const double vmax = *std::max_element(v.g.values.begin(), v.g.values.end());
  const double sigma = -vmax - 1.0;  // strictly below the spectrum

  auto cg_solve = [&](const std::vector<double>& b, std::vector<double>& x) {
    x.assign(total, 0.0);
    std::vector<double> r = b, p = b, ap(total);
    double rr = 0.0;
    for (double s : r) rr += s * s;
    const double stop = rr * 1e-22;  // (1e-11 relative)^2
    for (int it = 0; it < 20000 && rr > stop; ++it) {
      apply(p, ap);
      for (std::size_t i = 0; i < total; ++i) ap[i] -= sigma * p[i];
      double pap = 0.0;
      for (std::size_t i = 0; i < total; ++i) pap += p[i] * ap[i];
      const double alpha = rr / pap;
      for (std::size_t i = 0; i < total; ++i) x[i] += alpha * p[i];
      for (std::size_t i = 0; i < total; ++i) r[i] -= alpha * ap[i];
      double rr_new = 0.0;
      for (double s : r) rr_new += s * s;
      const double beta = rr_new / rr;
      for (std::size_t i = 0; i < total; ++i) p[i] = r[i] + beta * p[i];
      rr = rr_new;
    }
  };

  std::vector<double> phi(total, 1.0 / std::sqrt(static_cast<double>(total)));
  std::vector<double> w, hphi(total);
  double theta = 0.0, theta_prev = 0.0, residual = 0.0;
  std::vector<double> residual_history;
  int it = 0;
  bool converged = false;
  for (; it < opts.max_iterations; ++it) {
    cg_solve(phi, w);
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : w) x /= norm;
    phi.swap(w);

    apply(phi, hphi);
    theta = 0.0;
    for (std::size_t i = 0; i < total; ++i) theta += phi[i] * hphi[i];
    double res2 = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      const double r = hphi[i] - theta * phi[i];
      res2 += r * r;
    }
    residual = std::sqrt(res2);
    residual_history.push_back(residual);
    if (it > 0 && std::abs(theta - theta_prev) <= opts.eig_tol * std::max(1.0, std::abs(theta)) &&
        residual <= 1e-6) {
      converged = true;
      ++it;
      break;
    }
    theta_prev = theta;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "lambda_2d: inverse iteration stagnated after " << it
        << " iterations; residual history:";
    for (double r : residual_history) msg << " " << r;
    throw NumericError(msg.str());
  }

  GroundState gs;
  gs.iterations = it;
  finish_ground_state(gs, v.g, std::move(phi), theta, residual, opts, "lambda_2d");
  return gs;
}

Potential combine_potential(const Mat& u, const std::vector<Potential>& v_parts,
                            const std::array<grid::Axis, 2>& axes) {
  if (u.rows() != 2) {
    throw InputError("combine_potential: directions must live in the plane");
  }
  if (static_cast<int>(v_parts.size()) != u.cols()) {
    throw InputError("combine_potential: need one 1-dim potential per direction");
  }
  for (const auto& p : v_parts) {
    p.check("combine_potential");
    if (p.g.dim != 1) {
      throw InputError("combine_potential: component potentials must be one-dimensional");
    }
  }
  grid::Grid g = grid::make_grid(2, {axes[0], axes[1], grid::Axis{}});
  for (int i = 0; i < axes[0].count; ++i) {
    const double x = g.axes[0].center(i);
    for (int j = 0; j < axes[1].count; ++j) {
      const double y = g.axes[1].center(j);
      double acc = 0.0;
      for (int k = 0; k < u.cols(); ++k) {
        const double t = u(0, k) * x + u(1, k) * y;
        acc += grid::interp1_strict(v_parts[k].g, t, "combine_potential");
      }
      g.at(i, j) = acc;
    }
  }
  return Potential{std::move(g)};
}

EigenSubadditivity eigen_subadditivity_check(const Mat& u, const Vec& c,
                                             const std::vector<Potential>& v_parts,
                                             const std::array<grid::Axis, 2>& axes,
                                             const SpectralOptions& opts) {
  check_unit_frame(u, c, "eigen_subadditivity_check");
  const Potential combined = combine_potential(u, v_parts, axes);

  EigenSubadditivity out;
  out.lhs = lambda_2d(combined, opts).lambda;
  for (int j = 0; j < u.cols(); ++j) {
    Potential scaled = v_parts[j];
    for (double& val : scaled.g.values) val /= c(j);
    const double lam = lambda_1d(scaled, opts).lambda;
    out.rhs_terms.push_back(c(j) * lam);
    out.rhs += c(j) * lam;
  }
  out.margin = out.rhs - out.lhs;
  out.holds = out.lhs <= out.rhs + opts.eq53_budget;
  return out;
}

LegendreFisherCheck legendre_fisher_check(const Potential& v,
                                          const entropy::DensityGrid& f,
                                          const SpectralOptions& opts) {
  v.check("legendre_fisher_check");
  if (!grid::same_geometry(v.g, f.g())) {
    throw InputError("legendre_fisher_check: potential and density grids differ");
  }
  LegendreFisherCheck out;
  double acc = 0.0;
  for (std::size_t i = 0; i < v.g.values.size(); ++i) {
    acc += v.g.values[i] * f.g().values[i];
  }
  out.pairing = acc * v.g.cell_volume();
  const GroundState gs = v.g.dim == 1 ? lambda_1d(v, opts) : lambda_2d(v, opts);
  out.bound = gs.lambda + entropy::fisher(f);
  out.holds = out.pairing <= out.bound + 1e-3;
  return out;
}

}  // namespace blsub::spectral
