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

#include "blsub/gaussopt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace blsub::gaussopt {

namespace {

using family::SpanningFamily;
using family::WeightVector;

std::string subset_str(const std::vector<int>& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i] + 1);
  }
  out += "}";
  return out;
}

// Scaled family A * diag(e^{t_j/2}) and its Gram matrix.
Mat scaled_columns(const SpanningFamily& a, const Vec& t) {
  Mat m = a.columns();
  for (int j = 0; j < a.m(); ++j) {
    m.col(j) *= std::exp(0.5 * t(j));
  }
  return m;
}

Eigen::LLT<Mat> gram_llt(const SpanningFamily& a, const Vec& t, const char* op) {
  const Mat m = scaled_columns(a, t);
  const Mat gram = m * m.transpose();
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    std::ostringstream msg;
    msg << op << ": scaled Gram matrix is numerically singular; near-null direction (";
    const Vec dir = es.eigenvectors().col(0);
    for (int i = 0; i < dir.size(); ++i) {
      if (i) msg << ", ";
      msg << dir(i);
    }
    msg << ")";
    throw NumericError(msg.str());
  }
  return llt;
}

void check_t(const SpanningFamily& a, const Vec& t, const char* op) {
  if (t.size() != a.m()) {
    throw InputError(std::string(op) + ": scaling vector length does not match family size");
  }
  if (!t.allFinite()) {
    throw InputError(std::string(op) + ": non-finite scaling entries");
  }
}

double sum_c_ln_c(const Vec& c) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (c(j) > 0.0) acc += c(j) * std::log(c(j));
  }
  return acc;
}

double objective(const SpanningFamily& a, const Vec& c, const Vec& t) {
  return c.dot(t) - phi(a, t);
}

// Interior frame construction: optimizer scalings s_j^2 = e^{t*_j}, then
// R0 = ((AS)(AS)^T)^{-1/2}.
Mat interior_frame(const SpanningFamily& a, const WeightVector& c) {
  GaussOptResult opt = maximize_gap(a, c);
  if (opt.grad_norm > 1e-8) {
    throw NumericError("frame construction: interior solve did not reach stationarity "
                       "(gradient " + std::to_string(opt.grad_norm) + ")");
  }
  const Mat m = scaled_columns(a, opt.t_star);
  return linops::inv_sqrt_pd(m * m.transpose());
}

// Assembles the frame change of variables from a block decomposition:
// T orthogonalizes the blocks, each block gets its interior frame, and the
// pieces combine through sqrt(T R^2 T).
Mat assemble_frame(const SpanningFamily& a, const WeightVector& c,
                   const family::ReducibilityReport& red) {
  const int n = a.n();
  Mat w(n, n);
  int col = 0;
  for (const auto& block : red.blocks) {
    w.block(0, col, n, block.space.dim()) = block.space.basis;
    col += block.space.dim();
  }
  if (col != n) {
    throw ConsistencyError("frame assembly: block dimensions do not add up to n");
  }
  const Mat t_op = linops::inv_sqrt_pd(w * w.transpose());

  Mat r_hat = Mat::Zero(n, n);
  for (const auto& block : red.blocks) {
    const linops::Subspace q = linops::orthonormalize(t_op * block.space.basis);
    const Mat local = q.basis.transpose() * t_op * a.submatrix(block.indices);
    const Mat r_local = interior_frame(SpanningFamily(local),
                                       WeightVector(c.subvector(block.indices)));
    r_hat += q.basis * r_local * q.basis.transpose();
  }
  return linops::sqrt_pd(t_op * r_hat * r_hat * t_op);
}

double frame_residual(const SpanningFamily& a, const WeightVector& c, const Mat& r) {
  const int n = a.n();
  Mat acc = Mat::Zero(n, n);
  for (int j = 0; j < a.m(); ++j) {
    if (c[j] <= 0.0) continue;
    Vec u = r * a.column(j);
    u /= u.norm();
    acc += c[j] * u * u.transpose();
  }
  acc -= Mat::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Mat> es(acc);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double general_gaussian_gap(const Mat& columns, const Vec& c, const Mat& cov) {
  const int n = static_cast<int>(columns.rows());
  const double ld = linops::logdet_pd(cov);
  double acc = 0.0;
  for (int j = 0; j < columns.cols(); ++j) {
    const double q = columns.col(j).dot(cov * columns.col(j));
    acc += c(j) * std::log(q);
  }
  const double defect =
      (n - c.sum()) * 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  return 0.5 * (ld - acc) + defect;
}

}  // namespace

double phi(const SpanningFamily& a, const Vec& t) {
  check_t(a, t, "phi");
  auto llt = gram_llt(a, t, "phi");
  double acc = 0.0;
  const Mat l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    acc += std::log(l(i, i));
  }
  return 2.0 * acc;
}

Vec phi_grad(const SpanningFamily& a, const Vec& t) {
  check_t(a, t, "phi_grad");
  auto llt = gram_llt(a, t, "phi_grad");
  const Mat m = scaled_columns(a, t);
  const Mat w = llt.matrixL().solve(m);  // L^{-1} (AS)
  Vec g(a.m());
  for (int j = 0; j < a.m(); ++j) {
    g(j) = w.col(j).squaredNorm();
  }
  return g;
}

Mat phi_hess(const SpanningFamily& a, const Vec& t) {
  check_t(a, t, "phi_hess");
  auto llt = gram_llt(a, t, "phi_hess");
  const Mat m = scaled_columns(a, t);
  const Mat w = llt.matrixL().solve(m);
  const Mat p = w.transpose() * w;  // projection onto the row space of AS
  Mat h = -p.cwiseProduct(p);
  h.diagonal() += p.diagonal();
  return h;
}

GaussOptResult maximize_gap(const SpanningFamily& a, const WeightVector& c,
                            const GaussOptOptions& opts) {
  if (c.size() != a.m()) {
    throw InputError("maximize_gap: weight count does not match family size");
  }
  const family::FeasibilityReport feas = family::feasibility(a, c);
  if (!feas.in_KA) {
    throw InfeasibleError("maximize_gap: c lies outside the feasibility polytope");
  }

  const int m = a.m();
  const Vec& cv = c.values();
  Vec t = Vec::Zero(m);
  Vec g = phi_grad(a, t);
  Vec r = cv - g;
  double merit = r.cwiseAbs().maxCoeff();
  double f_cur = objective(a, cv, t);
  double best_value = f_cur;
  Vec best_t = t;

  GaussOptResult out;
  bool hit_cap = false;
  bool stalled = false;
  int it = 0;
  std::vector<double> merit_trace{merit};

  for (; it < opts.max_iterations && merit > opts.grad_tol; ++it) {
    Mat h = phi_hess(a, t);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const Vec& lam = es.eigenvalues();
    const double lam_max = std::max(lam.maxCoeff(), 0.0);
    const double cutoff = std::max(lam_max, 1.0) * 1e-13;

    // Pseudo-inverse Newton step; the all-ones null direction (and any
    // boundary flat directions) are cut off.
    Vec step = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
      if (lam(i) > cutoff) {
        step += (es.eigenvectors().col(i).dot(r) / lam(i)) * es.eigenvectors().col(i);
      }
    }
    if (!step.allFinite() || step.dot(r) <= 0.0) {
      step = r;  // gradient ascent fallback
    }
    step.array() -= step.mean();  // keep the sum(t) = 0 gauge
    const double step_len = step.cwiseAbs().maxCoeff();
    if (step_len > 20.0) {
      step *= 20.0 / step_len;  // near-singular Hessians suggest wild steps
    }

    // Halve until the objective increases; a gradient-norm decrease is also
    // accepted, which carries the endgame where F is flat to roundoff. A
    // trial point that degenerates the Gram matrix counts as a failed step.
    double alpha = 1.0;
    bool accepted = false;
    Vec t_try, r_try;
    double merit_try = 0.0;
    double f_try = 0.0;
    for (int halve = 0; halve < 60; ++halve) {
      t_try = t + alpha * step;
      t_try.array() -= t_try.mean();
      try {
        r_try = cv - phi_grad(a, t_try);
        merit_try = r_try.cwiseAbs().maxCoeff();
        f_try = objective(a, cv, t_try);
        if (f_try > f_cur || merit_try < merit) {
          accepted = true;
          break;
        }
      } catch (const NumericError&) {
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    t = t_try;
    r = r_try;
    merit = merit_try;
    f_cur = f_try;
    merit_trace.push_back(merit);
    if (f_cur > best_value) {
      best_value = f_cur;
      best_t = t;
    }
    if (t.cwiseAbs().maxCoeff() > opts.t_cap) {
      hit_cap = true;
      ++it;
      break;
    }
  }

  out.t_star = best_t;
  out.value = best_value;
  out.grad_norm = merit;
  out.iterations = it;
  const bool converged = merit <= opts.grad_tol;
  out.attained = feas.in_interior && converged;

  if (!feas.in_interior) {
    // 0/1-patterned recession direction from the first minimal critical subset.
    const auto minimal = family::minimal_critical(a, c);
    Vec dir = Vec::Zero(m);
    for (int j : minimal.front()) dir(j) = 1.0;
    dir /= dir.norm();
    out.recession = dir;
    return out;
  }

  if (!converged) {
    std::ostringstream msg;
    msg << "maximize_gap: interior instance failed to converge ("
        << (hit_cap ? "scaling cap reached" : (stalled ? "line search stalled" : "iteration cap"))
        << "; gradient " << merit << "); merit trace:";
    for (double v : merit_trace) msg << " " << v;
    throw NumericError(msg.str());
  }
  return out;
}

namespace {

// Recursive splitting-tree builder. The instance handed in has no
// zero-weight columns except possibly at the very top level.
TreeNode build_tree(const SpanningFamily& fam, const WeightVector& w,
                    const std::vector<int>& labels) {
  TreeNode node;
  node.ambient_dim = fam.n();

  // Exact one-dimensional closed form, zero weights included (0 ln 0 = 0).
  if (fam.n() == 1) {
    node.kind = TreeNode::Kind::kLineLeaf;
    node.indices = labels;
    double d = 0.0;
    for (int j = 0; j < fam.m(); ++j) {
      if (w[j] > 0.0) d -= w[j] * std::log(std::abs(fam.columns()(0, j)));
    }
    node.value = d;
    return node;
  }

  // Zero weights play no role; drop them before optimizing or splitting.
  std::vector<int> nz;
  for (int j = 0; j < fam.m(); ++j) {
    if (w[j] > family::kEqTol) nz.push_back(j);
  }
  const bool dropped = static_cast<int>(nz.size()) < fam.m();
  const SpanningFamily fam2 = dropped ? SpanningFamily(fam.submatrix(nz)) : fam;
  const WeightVector w2 = dropped ? WeightVector(w.subvector(nz)) : w;
  std::vector<int> labels2;
  if (dropped) {
    for (int k : nz) labels2.push_back(labels[k]);
  } else {
    labels2 = labels;
  }
  node.indices = labels2;

  const family::FeasibilityReport feas = family::feasibility(fam2, w2);
  if (!feas.in_KA) {
    throw ConsistencyError("constant: sub-instance left the polytope at node " +
                           subset_str(labels2));
  }

  if (feas.in_interior) {
    node.kind = TreeNode::Kind::kInteriorLeaf;
    GaussOptResult opt = maximize_gap(fam2, w2);
    node.value = 0.5 * (opt.value - sum_c_ln_c(w2.values()));
    node.opt = std::move(opt);
    return node;
  }

  const auto minimal = family::minimal_critical(fam2, w2);
  node.kind = TreeNode::Kind::kSplit;
  bool first = true;
  for (const auto& local_j : minimal) {
    family::SplitInstance sp = family::split(fam2, w2, local_j);
    std::vector<int> inner_labels, outer_labels;
    for (int k : sp.inner_indices) inner_labels.push_back(labels2[k]);
    for (int k : sp.outer_indices) outer_labels.push_back(labels2[k]);

    TreeNode inner, outer;
    try {
      inner = build_tree(sp.inner, sp.inner_weights, inner_labels);
      outer = build_tree(sp.outer, sp.outer_weights, outer_labels);
    } catch (const NumericError& e) {
      throw NumericError("constant: below subset " + subset_str(inner_labels) + ": " +
                         e.what());
    }
    const double total = inner.value + outer.value;
    if (first) {
      node.split_subset = inner_labels;
      node.value = total;
      node.children.clear();
      node.children.push_back(std::move(inner));
      node.children.push_back(std::move(outer));
      first = false;
    } else {
      node.cross_check_values.push_back(total);
      if (std::abs(total - node.value) > 1e-8) {
        throw NumericError("constant: splitting values disagree at node " +
                           subset_str(labels2) + ": " + std::to_string(node.value) +
                           " vs " + std::to_string(total) + " via " +
                           subset_str(inner_labels));
      }
    }
  }
  return node;
}

}  // namespace

ConstantReport constant(const SpanningFamily& a, const WeightVector& c) {
  if (c.size() != a.m()) {
    throw InputError("constant: weight count does not match family size");
  }
  ConstantReport rep;
  rep.feasibility = family::feasibility(a, c);
  if (!rep.feasibility.in_KA) {
    rep.D = std::numeric_limits<double>::infinity();
    rep.tree.kind = TreeNode::Kind::kInfeasible;
    rep.tree.ambient_dim = a.n();
    for (int j = 0; j < a.m(); ++j) rep.tree.indices.push_back(j);
    rep.attained = false;
    return rep;
  }
  std::vector<int> labels(a.m());
  for (int j = 0; j < a.m(); ++j) labels[j] = j;
  rep.tree = build_tree(a, c, labels);
  rep.D = rep.tree.value;
  rep.attained = family::total_reducibility(a, c).totally_reducible();
  return rep;
}

double gaussian_gap(const SpanningFamily& a, const WeightVector& c,
                    const GaussianSpec& g) {
  if (c.size() != a.m()) {
    throw InputError("gaussian_gap: weight count does not match family size");
  }
  if (std::abs(c.sum() - a.n()) > 1e-9) {
    throw InputError("gaussian_gap: weights must sum to the ambient dimension");
  }
  const double ld = linops::logdet_pd(g.covariance);  // rejects non-SPD input
  double acc = 0.0;
  for (int j = 0; j < a.m(); ++j) {
    const double q = a.column(j).dot(g.covariance * a.column(j));
    if (!(q > 0.0)) {
      throw NumericError("gaussian_gap: quadratic form is not positive for column " +
                         std::to_string(j + 1));
    }
    acc += c[j] * std::log(q);
  }
  return 0.5 * (ld - acc);
}

FrameMatrix frame_matrix(const SpanningFamily& a, const WeightVector& c) {
  family::ReducibilityReport red = family::total_reducibility(a, c);
  if (!red.totally_reducible()) {
    throw NotReducibleError(
        "frame_matrix: no frame change of variables exists; critical subset " +
            (red.certificate ? subset_str(*red.certificate) : std::string("(unknown)")) +
            " fails the direct-sum condition",
        std::move(red));
  }
  Mat r = assemble_frame(a, c, red);
  r *= std::sqrt(a.n() / (r * r).trace());

  FrameMatrix out;
  out.residual = frame_residual(a, c, r);
  out.trace_R2 = (r * r).trace();
  out.R = std::move(r);
  return out;
}

ExtremizerDescription extremizers(const SpanningFamily& a, const WeightVector& c) {
  family::ReducibilityReport red = family::total_reducibility(a, c);
  ExtremizerDescription out;
  if (!red.totally_reducible()) {
    out.exists = false;
    out.certificate = red.certificate;
    return out;
  }
  out.exists = true;

  const int n = a.n();
  Mat w(n, n);
  int col = 0;
  for (const auto& block : red.blocks) {
    w.block(0, col, n, block.space.dim()) = block.space.basis;
    col += block.space.dim();
  }
  const Mat t_op = linops::inv_sqrt_pd(w * w.transpose());
  out.transform = t_op;

  for (const auto& block : red.blocks) {
    ExtremizerBlock b;
    b.indices = block.indices;
    b.dim = block.space.dim();
    const linops::Subspace q = linops::orthonormalize(t_op * block.space.basis);
    b.basis = q.basis;
    if (b.dim == 1) {
      b.free = true;
    } else {
      const Mat local = q.basis.transpose() * t_op * a.submatrix(block.indices);
      Mat r_local = interior_frame(SpanningFamily(local),
                                   WeightVector(c.subvector(block.indices)));
      r_local *= std::sqrt(b.dim / (r_local * r_local).trace());
      b.covariance = r_local * r_local;
    }
    out.blocks.push_back(std::move(b));
  }
  return out;
}

HadamardCheck hadamard_check(const SpanningFamily& a, const WeightVector& c,
                             const Mat& t) {
  if (t.rows() != a.n() || t.cols() != a.n()) {
    throw InputError("hadamard_check: transform must be n x n");
  }
  Eigen::PartialPivLU<Mat> lu(t);
  const double det = lu.determinant();
  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  if (std::abs(det) <= 1e-14 * std::pow(scale, a.n())) {
    throw InputError("hadamard_check: transform is singular");
  }
  const ConstantReport rep = constant(a, c);
  if (!rep.finite()) {
    throw InfeasibleError("hadamard_check: D(A,c) is infinite for this instance");
  }
  HadamardCheck out;
  out.lhs = std::abs(det);
  double log_rhs = rep.D;
  for (int j = 0; j < a.m(); ++j) {
    log_rhs += c[j] * std::log((t * a.column(j)).norm());
  }
  out.rhs = std::exp(log_rhs);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-8);
  return out;
}

double phi_star(const SpanningFamily& a, const WeightVector& c) {
  const ConstantReport rep = constant(a, c);
  if (!rep.finite()) {
    throw InfeasibleError("phi_star: c lies outside the feasibility polytope");
  }
  return 2.0 * rep.D + sum_c_ln_c(c.values());
}

family::WeightVector minimizing_c(const SpanningFamily& a) {
  const Mat gram = a.columns() * a.columns().transpose();
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericError("minimizing_c: Gram matrix is not positive definite");
  }
  const Mat w = llt.matrixL().solve(a.columns());
  Vec c(a.m());
  for (int j = 0; j < a.m(); ++j) {
    c(j) = w.col(j).squaredNorm();
  }
  return family::WeightVector(std::move(c));
}

DivergenceWitness divergence_witness(const Mat& columns, const Vec& c, double tol) {
  const int n = static_cast<int>(columns.rows());
  const int m = static_cast<int>(columns.cols());
  if (c.size() != m) {
    throw InputError("divergence_witness: weight count does not match column count");
  }
  if (!linops::all_finite(columns) || !c.allFinite()) {
    throw InputError("divergence_witness: non-finite input");
  }
  for (int j = 0; j < m; ++j) {
    if (c(j) < 0.0) {
      throw InputError("divergence_witness: negative weight");
    }
    if (columns.col(j).norm() == 0.0) {
      throw InputError("divergence_witness: zero column");
    }
  }

  if (m > family::kMaxSubsetEnum) {
    throw CapacityError("divergence_witness: m exceeds the subset enumeration envelope");
  }

  DivergenceWitness out;
  const int rank = linops::rank_tol(columns);

  auto probe = [&](const Mat& cov_a, const Mat& cov_b, double la, double lb) {
    out.lambdas = {la, lb};
    out.gaps = {general_gaussian_gap(columns, c, cov_a),
                general_gaussian_gap(columns, c, cov_b)};
    out.fitted_rate = (out.gaps[1] - out.gaps[0]) / (std::log(lb) - std::log(la));
  };

  if (rank < n) {
    const linops::Subspace span = linops::orthonormalize(columns);
    out.kind = WitnessKind::kSpanDeficiency;
    out.space = linops::complement(span);
    out.lambda_rate = 0.5 * out.space.dim();
    const Mat p = out.space.projector();
    const Mat id = Mat::Identity(n, n);
    auto cov = [&](double lam) { return Mat(lam * p + (id - p)); };
    probe(cov(1e2), cov(1e4), 1e2, 1e4);
    return out;
  }

  if (std::abs(c.sum() - n) > tol) {
    out.kind = WitnessKind::kDilation;
    out.space = linops::Subspace{Mat::Identity(n, n)};
    out.lambda_rate = n - c.sum();
    const bool grow = out.lambda_rate > 0.0;
    const double la = grow ? 1e2 : 1e-2;
    const double lb = grow ? 1e4 : 1e-4;
    const Mat id = Mat::Identity(n, n);
    probe(Mat(la * la * id), Mat(lb * lb * id), la, lb);
    return out;
  }

  // Violated subset: minimal cardinality, then lexicographic, with its span
  // closure so the predicted rate matches the actual leading term.
  std::vector<int> best;
  int best_dim = 0;
  {
    std::vector<int> stack;
    auto rec = [&](auto&& self, int start, double wsum) -> void {
      for (int j = start; j < m; ++j) {
        stack.push_back(j);
        const double w = wsum + c(j);
        if (best.empty() || stack.size() < best.size()) {
          Mat sub(n, static_cast<int>(stack.size()));
          for (size_t k = 0; k < stack.size(); ++k) sub.col(static_cast<int>(k)) = columns.col(stack[k]);
          const int dim = linops::rank_tol(sub);
          if (w > dim + tol && (best.empty() || stack.size() < best.size())) {
            best = stack;
            best_dim = dim;
          }
        }
        if (best.empty() || stack.size() + 1 < best.size()) {
          self(self, j + 1, w);
        }
        stack.pop_back();
      }
    };
    rec(rec, 0, 0.0);
  }
  if (best.empty()) {
    throw LogicError("divergence_witness: c is feasible; nothing diverges");
  }

  Mat sub(n, static_cast<int>(best.size()));
  for (size_t k = 0; k < best.size(); ++k) sub.col(static_cast<int>(k)) = columns.col(best[k]);
  const linops::Subspace vj = linops::orthonormalize(sub);
  const Mat p = vj.projector();
  // Close the subset under the span: columns inside V_J sharpen the rate.
  std::vector<int> closure;
  double wsum = 0.0;
  for (int j = 0; j < m; ++j) {
    const Vec res = columns.col(j) - p * columns.col(j);
    if (res.norm() <= 1e-8 * columns.col(j).norm()) {
      closure.push_back(j);
      wsum += c(j);
    }
  }
  out.kind = WitnessKind::kSubsetCollapse;
  out.subset = closure;
  out.space = vj;
  out.lambda_rate = 0.5 * (best_dim - wsum);
  const Mat id = Mat::Identity(n, n);
  auto cov = [&](double lam) { return Mat(lam * p + (id - p)); };
  probe(cov(1e-2), cov(1e-4), 1e-2, 1e-4);
  return out;
}

}  // namespace blsub::gaussopt
