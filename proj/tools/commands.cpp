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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "blsub/blverify.hpp"
#include "blsub/entropy.hpp"
#include "blsub/family.hpp"
#include "blsub/gaussopt.hpp"
#include "blsub/grid.hpp"
#include "blsub/spectral.hpp"
#include "report.hpp"

namespace blsub::cli {

namespace {

constexpr double kEntropyBudget = 5e-3;
constexpr double kEigenBudget = 2e-3;

std::string header(const Instance& inst, const char* command, bool timestamp) {
  std::ostringstream os;
  os << kReportSchema << "\n";
  os << "instance " << inst.name << "\n";
  os << "command " << command << "\n";
  os << "n " << inst.n << "\n";
  os << "m " << inst.columns.cols() << "\n";
  if (timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "timestamp " << buf << "\n";
  }
  return os.str();
}

family::SpanningFamily make_family(const Instance& inst) {
  return family::SpanningFamily(inst.columns);
}

family::WeightVector make_weights(const Instance& inst) {
  return family::WeightVector(inst.weights);
}

void render_feasibility(std::ostringstream& os, const family::FeasibilityReport& rep,
                        double tol) {
  os << "\n[feasibility]\n";
  os << "tol " << fmt(tol) << "\n";
  os << "sum_c " << fmt(rep.sum_c) << "\n";
  os << "sum_matches " << yesno(rep.sum_matches) << "\n";
  os << "in_KA " << yesno(rep.in_KA) << "\n";
  os << "in_interior " << yesno(rep.in_interior) << "\n";
  os << "critical_total " << rep.n_critical_total << "\n";
  for (const auto& s : rep.critical) {
    os << "critical " << fmt_subset(s.indices) << " sum " << fmt(s.weight_sum) << " dim "
       << s.dim << "\n";
  }
  os << "violations_total " << rep.n_violations_total << "\n";
  for (const auto& s : rep.violations) {
    os << "violation " << fmt_subset(s.indices) << " sum " << fmt(s.weight_sum) << " dim "
       << s.dim << "\n";
  }
}

void render_witness(std::ostringstream& os, std::string* csv, const Instance& inst) {
  try {
    const auto w = gaussopt::divergence_witness(inst.columns, inst.weights, inst.tol_eq);
    const char* kind = w.kind == gaussopt::WitnessKind::kDilation     ? "dilation"
                       : w.kind == gaussopt::WitnessKind::kSubsetCollapse ? "subset"
                                                                          : "span";
    os << "witness kind=" << kind;
    if (!w.subset.empty()) os << " subset=" << fmt_subset(w.subset);
    os << " rate=" << fmt(w.lambda_rate) << " fitted=" << fmt(w.fitted_rate) << "\n";
    if (csv) {
      std::ostringstream c;
      c << "lambda,gap\n";
      c << fmt(w.lambdas[0]) << "," << fmt(w.gaps[0]) << "\n";
      c << fmt(w.lambdas[1]) << "," << fmt(w.gaps[1]) << "\n";
      *csv = c.str();
    }
  } catch (const Error& e) {
    os << "witness error: " << e.what() << "\n";
  }
}

void render_tree(std::ostringstream& os, const gaussopt::TreeNode& node, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
  os << "- ";
  switch (node.kind) {
    case gaussopt::TreeNode::Kind::kInteriorLeaf: {
      os << "interior dim=" << node.ambient_dim << " indices=" << fmt_subset(node.indices)
         << " D=" << fmt(node.value);
      if (node.opt) {
        os << " grad=" << fmt(node.opt->grad_norm) << " iterations=" << node.opt->iterations;
      }
      os << "\n";
      break;
    }
    case gaussopt::TreeNode::Kind::kLineLeaf:
      os << "line dim=1 indices=" << fmt_subset(node.indices) << " D=" << fmt(node.value)
         << "\n";
      break;
    case gaussopt::TreeNode::Kind::kSplit: {
      os << "split dim=" << node.ambient_dim << " indices=" << fmt_subset(node.indices)
         << " J=" << fmt_subset(node.split_subset) << " D=" << fmt(node.value);
      if (!node.cross_check_values.empty()) {
        os << " cross={";
        for (std::size_t i = 0; i < node.cross_check_values.size(); ++i) {
          if (i) os << ",";
          os << fmt(node.cross_check_values[i]);
        }
        os << "}";
      }
      os << "\n";
      for (const auto& child : node.children) render_tree(os, child, depth + 1);
      break;
    }
    case gaussopt::TreeNode::Kind::kInfeasible:
      os << "infeasible dim=" << node.ambient_dim << "\n";
      break;
  }
}

void render_constant(std::ostringstream& os, const family::SpanningFamily& fam,
                     const family::WeightVector& w, const gaussopt::ConstantReport& rep) {
  os << "\n[constant]\n";
  os << "D " << fmt(rep.D) << "\n";
  os << "exp_D " << fmt(std::exp(rep.D)) << "\n";
  os << "attained " << yesno(rep.attained) << "\n";
  if (rep.finite() && !rep.feasibility.in_interior) {
    // Boundary diagnostic: the capped ascent value next to the splitting-tree
    // value (the latter is authoritative).
    try {
      const auto opt = gaussopt::maximize_gap(fam, w);
      double sclnc = 0.0;
      for (int j = 0; j < w.size(); ++j) {
        if (w[j] > 0.0) sclnc += w[j] * std::log(w[j]);
      }
      os << "boundary_scan_D " << fmt(0.5 * (opt.value - sclnc)) << "\n";
      if (opt.recession) {
        std::vector<int> pattern;
        for (int j = 0; j < opt.recession->size(); ++j) {
          if ((*opt.recession)(j) > 0.0) pattern.push_back(j);
        }
        os << "recession " << fmt_subset(pattern) << "\n";
      }
    } catch (const Error& e) {
      os << "boundary_scan_error " << e.what() << "\n";
    }
  }
  os << "tree:\n";
  render_tree(os, rep.tree, 0);
}

// ---------------------------------------------------------------------------
// Verification blocks
// ---------------------------------------------------------------------------

struct BlockOutcome {
  std::string name;
  std::string verdict;  // holds|equality|inconclusive|violated(numerical)|skipped ...|error: ...
  std::string detail;   // rendered key=value content
  bool ran = false;
  bool error = false;
  bool inconclusive = false;
  double excess = std::numeric_limits<double>::quiet_NaN();
};

bool unit_frame_condition(const Mat& u, const Vec& c) {
  const int n = static_cast<int>(u.rows());
  for (int j = 0; j < u.cols(); ++j) {
    if (std::abs(u.col(j).norm() - 1.0) > 1e-9) return false;
  }
  Mat acc = Mat::Zero(n, n);
  for (int j = 0; j < u.cols(); ++j) {
    acc += c(j) * u.col(j) * u.col(j).transpose();
  }
  acc -= Mat::Identity(n, n);
  return acc.cwiseAbs().maxCoeff() <= 1e-9;
}

std::string verdict_with_budget(double excess, double budget) {
  if (std::abs(excess) <= budget) return "equality";
  if (excess < 0.0) return "holds";
  if (excess <= 10.0 * budget) return "inconclusive";
  return "violated(numerical)";
}

entropy::DensityGrid load_density(const Instance& inst) {
  return entropy::DensityGrid::validated(
      grid::read_grid_file(inst.resolve(*inst.density_file)));
}

BlockOutcome run_entropy_block(const Instance& inst, const family::SpanningFamily& fam,
                               const family::WeightVector& w, double d_value,
                               std::string* csv) {
  BlockOutcome out;
  out.name = "entropy";
  if (!inst.density_file) {
    out.verdict = "skipped (no density file)";
    return out;
  }
  const entropy::DensityGrid f = load_density(inst);
  const double gap = entropy::subadditivity_gap(f, fam, w);
  out.excess = gap - d_value;
  out.verdict = verdict_with_budget(out.excess, kEntropyBudget);
  std::ostringstream os;
  os << "gap=" << fmt(gap) << " D=" << fmt(d_value) << " excess=" << fmt(out.excess)
     << " tol=" << fmt(kEntropyBudget);
  out.detail = os.str();
  out.ran = true;
  out.inconclusive = out.verdict == "inconclusive";

  if (csv && inst.n == 2 && unit_frame_condition(inst.columns, inst.weights)) {
    // Diagnostic scan only; a box too small for the flow must not fail the
    // block itself.
    try {
      const std::vector<double> times{0.0, 0.05, 0.1, 0.2, 0.4};
      const auto scan = entropy::heat_monotonicity_scan(f, inst.columns, inst.weights, times);
      std::ostringstream c;
      c << "t,info_gap\n";
      for (const auto& pt : scan) {
        c << fmt(pt.t) << "," << fmt(pt.info_gap) << "\n";
      }
      *csv = c.str();
    } catch (const Error&) {
      csv->clear();
    }
  }
  return out;
}

BlockOutcome run_bl_block(const Instance& inst, const family::SpanningFamily& fam,
                          const family::WeightVector& w) {
  BlockOutcome out;
  out.name = "bl";
  if (static_cast<int>(inst.factor_files.size()) != fam.m()) {
    out.verdict = inst.factor_files.empty()
                      ? "skipped (no factor files)"
                      : "skipped (factor count does not match m)";
    return out;
  }
  blverify::FactorSet factors;
  for (const auto& path : inst.factor_files) {
    factors.factors.push_back(grid::read_grid_file(inst.resolve(path)));
  }
  const int cells = inst.n == 1 ? inst.grid_1d : (inst.n == 2 ? inst.grid_2d : 96);
  const blverify::GridSpec domain = blverify::default_domain(fam, factors, cells);
  const blverify::BLReport rep = blverify::bl_check(fam, w, factors, domain);
  out.excess = rep.ratio - 1.0;
  switch (rep.verdict) {
    case blverify::Verdict::kHolds: out.verdict = "holds"; break;
    case blverify::Verdict::kEquality: out.verdict = "equality"; break;
    case blverify::Verdict::kInconclusive:
      out.verdict = "inconclusive";
      out.inconclusive = true;
      break;
    case blverify::Verdict::kViolatedNumerical: out.verdict = "violated(numerical)"; break;
  }
  std::ostringstream os;
  os << "lhs=" << fmt(rep.lhs) << " rhs=" << fmt(rep.rhs) << " ratio=" << fmt(rep.ratio)
     << " tol=" << fmt(rep.tol);
  out.detail = os.str();
  out.ran = true;
  return out;
}

BlockOutcome run_fisher_block(const Instance& inst, const family::SpanningFamily& fam,
                              const family::WeightVector& w) {
  BlockOutcome out;
  out.name = "fisher";
  if (!inst.density_file) {
    out.verdict = "skipped (no density file)";
    return out;
  }
  if (!unit_frame_condition(inst.columns, inst.weights)) {
    out.verdict = "skipped (family is not a unit decomposition of the identity)";
    return out;
  }
  const entropy::DensityGrid f = load_density(inst);
  const double tol = 1e-2;
  const auto chk = entropy::fisher_superadditivity_check(f, fam.columns(), w.values(), tol);
  out.excess = chk.lhs - chk.rhs;
  out.verdict = verdict_with_budget(out.excess, tol);
  std::ostringstream os;
  os << "lhs=" << fmt(chk.lhs) << " rhs=" << fmt(chk.rhs) << " tol=" << fmt(tol);
  out.detail = os.str();
  out.ran = true;
  out.inconclusive = out.verdict == "inconclusive";
  return out;
}

BlockOutcome run_eigen_block(const Instance& inst, const family::SpanningFamily& fam,
                             const family::WeightVector& w) {
  BlockOutcome out;
  out.name = "eigen";
  if (static_cast<int>(inst.potential_files.size()) != inst.columns.cols()) {
    out.verdict = inst.potential_files.empty()
                      ? "skipped (no potential files)"
                      : "skipped (potential count does not match m)";
    return out;
  }
  if (inst.n != 2) {
    out.verdict = "skipped (eigen check needs n = 2)";
    return out;
  }
  if (!unit_frame_condition(inst.columns, inst.weights)) {
    out.verdict = "skipped (family is not a unit decomposition of the identity)";
    return out;
  }
  std::vector<spectral::Potential> parts;
  double half = 8.0;
  for (int j = 0; j < inst.columns.cols(); ++j) {
    spectral::Potential p{grid::read_grid_file(inst.resolve(inst.potential_files[j]))};
    p.check("eigen block");
    const grid::Axis& ax = p.g.axes[0];
    const double reach = std::min(-ax.center(0), ax.center(ax.count - 1));
    half = std::min(half, reach / inst.columns.col(j).lpNorm<1>());
    parts.push_back(std::move(p));
  }
  const int cells = std::min(inst.grid_2d, 256);
  const std::array<grid::Axis, 2> axes{grid::Axis{-half, half, cells},
                                       grid::Axis{-half, half, cells}};
  const auto chk =
      spectral::eigen_subadditivity_check(fam.columns(), w.values(), parts, axes);
  out.excess = chk.lhs - chk.rhs;
  out.verdict = verdict_with_budget(out.excess, kEigenBudget);
  std::ostringstream os;
  os << "lhs=" << fmt(chk.lhs) << " rhs=" << fmt(chk.rhs) << " margin=" << fmt(chk.margin)
     << " tol=" << fmt(kEigenBudget);
  out.detail = os.str();
  out.ran = true;
  out.inconclusive = out.verdict == "inconclusive";
  return out;
}

std::vector<BlockOutcome> run_blocks(const Instance& inst,
                                     const family::SpanningFamily& fam,
                                     const family::WeightVector& w, double d_value,
                                     const std::string& which, std::string* csv) {
  std::vector<BlockOutcome> out;
  auto guard = [&](const char* name, auto&& fn) {
    if (which != "all" && which != name) return;
    BlockOutcome o;
    try {
      o = fn();
    } catch (const Error& e) {
      o.name = name;
      o.verdict = std::string("error: ") + e.what();
      o.error = true;
    }
    out.push_back(std::move(o));
  };
  guard("entropy", [&] { return run_entropy_block(inst, fam, w, d_value, csv); });
  guard("bl", [&] { return run_bl_block(inst, fam, w); });
  guard("fisher", [&] { return run_fisher_block(inst, fam, w); });
  guard("eigen", [&] { return run_eigen_block(inst, fam, w); });
  return out;
}

}  // namespace

CommandResult cmd_feasibility(const Instance& inst, const CommandOptions& opts) {
  CommandResult res;
  std::ostringstream os;
  os << header(inst, "feasibility", opts.timestamp);
  try {
    if (linops::rank_tol(inst.columns, inst.tol_rank) < inst.n) {
      os << "\n[feasibility]\n";
      os << "in_KA no\n";
      os << "note columns span a proper subspace\n";
      render_witness(os, opts.want_csv ? &res.csv : nullptr, inst);
      res.exit_code = kExitInfeasible;
      res.report = os.str();
      return res;
    }
    const auto fam = make_family(inst);
    const auto w = make_weights(inst);
    const auto rep = family::feasibility(fam, w, inst.tol_eq);
    render_feasibility(os, rep, inst.tol_eq);
    if (!rep.in_KA) {
      render_witness(os, opts.want_csv ? &res.csv : nullptr, inst);
      res.exit_code = kExitInfeasible;
    }
  } catch (const Error& e) {
    os << "error " << e.what() << "\n";
    res.exit_code = kExitError;
  }
  res.report = os.str();
  return res;
}

CommandResult cmd_constant(const Instance& inst, const CommandOptions& opts) {
  CommandResult res;
  std::ostringstream os;
  os << header(inst, "constant", opts.timestamp);
  try {
    const auto fam = make_family(inst);
    const auto w = make_weights(inst);
    const auto rep = gaussopt::constant(fam, w);
    render_feasibility(os, rep.feasibility, inst.tol_eq);
    if (!rep.finite()) {
      render_witness(os, opts.want_csv ? &res.csv : nullptr, inst);
    }
    render_constant(os, fam, w, rep);
    if (!rep.finite()) res.exit_code = kExitInfeasible;
  } catch (const Error& e) {
    os << "error " << e.what() << "\n";
    res.exit_code = kExitError;
  }
  res.report = os.str();
  return res;
}

CommandResult cmd_frame(const Instance& inst, const CommandOptions& opts) {
  CommandResult res;
  std::ostringstream os;
  os << header(inst, "frame", opts.timestamp);
  try {
    const auto fam = make_family(inst);
    const auto w = make_weights(inst);
    os << "\n[frame]\n";
    try {
      const auto fm = gaussopt::frame_matrix(fam, w);
      os << "exists yes\n";
      os << "residual " << fmt(fm.residual) << "\n";
      os << "trace_R2 " << fmt(fm.trace_R2) << "\n";
      os << "R:\n" << fmt_matrix(fm.R, "  ");
    } catch (const gaussopt::NotReducibleError& e) {
      os << "exists no\n";
      if (e.report.certificate) {
        os << "certificate " << fmt_subset(*e.report.certificate) << "\n";
      }
    }
  } catch (const InfeasibleError& e) {
    os << "error " << e.what() << "\n";
    res.exit_code = kExitInfeasible;
  } catch (const Error& e) {
    os << "error " << e.what() << "\n";
    res.exit_code = kExitError;
  }
  res.report = os.str();
  return res;
}

CommandResult cmd_extremizers(const Instance& inst, const CommandOptions& opts) {
  CommandResult res;
  std::ostringstream os;
  os << header(inst, "extremizers", opts.timestamp);
  try {
    const auto fam = make_family(inst);
    const auto w = make_weights(inst);
    const auto desc = gaussopt::extremizers(fam, w);
    os << "\n[extremizers]\n";
    os << "exists " << yesno(desc.exists) << "\n";
    if (!desc.exists) {
      if (desc.certificate) {
        os << "certificate " << fmt_subset(*desc.certificate) << "\n";
      }
    } else {
      os << "transform:\n" << fmt_matrix(desc.transform, "  ");
      for (const auto& b : desc.blocks) {
        os << "block indices=" << fmt_subset(b.indices) << " dim=" << b.dim;
        if (b.free) {
          os << " free\n";
        } else {
          os << " covariance:\n" << fmt_matrix(b.covariance, "    ");
        }
      }
    }
  } catch (const InfeasibleError& e) {
    os << "error " << e.what() << "\n";
    res.exit_code = kExitInfeasible;
  } catch (const Error& e) {
    os << "error " << e.what() << "\n";
    res.exit_code = kExitError;
  }
  res.report = os.str();
  return res;
}

CommandResult cmd_verify(const Instance& inst, const CommandOptions& opts) {
  CommandResult res;
  std::ostringstream os;
  os << header(inst, "verify", opts.timestamp);
  try {
    const auto fam = make_family(inst);
    const auto w = make_weights(inst);
    const auto rep = gaussopt::constant(fam, w);
    render_feasibility(os, rep.feasibility, inst.tol_eq);
    os << "\n[constant]\n";
    os << "D " << fmt(rep.D) << "\n";
    os << "attained " << yesno(rep.attained) << "\n";

    os << "\n[verify " << opts.which << "]\n";
    if (!rep.finite()) {
      os << "verdict infeasible\n";
      os << "blocks skipped\n";
      res.exit_code = kExitInfeasible;
      res.report = os.str();
      return res;
    }
    const auto blocks = run_blocks(inst, fam, w, rep.D, opts.which,
                                   opts.want_csv ? &res.csv : nullptr);
    bool any_error = false, any_inconclusive = false;
    for (const auto& b : blocks) {
      os << b.name << ": ";
      if (!b.detail.empty()) os << b.detail << " ";
      os << "verdict=" << b.verdict << "\n";
      any_error |= b.error;
      any_inconclusive |= b.inconclusive;
      // An explicitly requested block that cannot run is a usage error.
      if (opts.which != "all" && !b.ran && !b.error) any_error = true;
    }
    if (any_error) {
      res.exit_code = kExitError;
    } else if (any_inconclusive) {
      res.exit_code = kExitInconclusive;
    }
  } catch (const Error& e) {
    os << "error " << e.what() << "\n";
    res.exit_code = kExitError;
  }
  res.report = os.str();
  return res;
}

CommandResult cmd_corpus(const std::string& directory, const CommandOptions& opts) {
  CommandResult res;
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) {
    res.report = "error corpus directory '" + directory + "' does not exist\n";
    res.exit_code = kExitError;
    return res;
  }
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".instance") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());

  struct Row {
    std::string name;
    std::string line;
  };
  std::vector<Row> rows(paths.size());

  auto run_one = [&](std::size_t idx) {
    const std::string& path = paths[idx];
    std::string name = fs::path(path).stem().string();
    std::ostringstream line;
    try {
      Instance inst;
      try {
        inst = parse_instance(path);
      } catch (const Error&) {
        line << name << " parse-error - - -";
        rows[idx] = {name, line.str()};
        return;
      }
      const auto fam = family::SpanningFamily(inst.columns);
      const auto w = family::WeightVector(inst.weights);
      const auto rep = gaussopt::constant(fam, w);
      if (!rep.finite()) {
        line << name << " no inf - -";
        rows[idx] = {name, line.str()};
        return;
      }
      const auto blocks = run_blocks(inst, fam, w, rep.D, "all", nullptr);
      double worst = -std::numeric_limits<double>::infinity();
      bool any = false, any_err = false;
      for (const auto& b : blocks) {
        if (b.error) any_err = true;
        if (b.ran && std::isfinite(b.excess)) {
          worst = std::max(worst, b.excess);
          any = true;
        }
      }
      line << name << " yes " << fmt(rep.D) << " " << yesno(rep.attained) << " "
           << (any_err ? "error" : (any ? fmt(worst) : "-"));
      rows[idx] = {name, line.str()};
    } catch (const Error& e) {
      (void)e;
      line << name << " error - - -";
      rows[idx] = {name, line.str()};
    }
  };

  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || paths.size() <= 1) {
    for (std::size_t i = 0; i < paths.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    std::mutex mu;
    std::size_t next = 0;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t idx;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next >= paths.size()) return;
            idx = next++;
          }
          run_one(idx);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // Aggregation is by sorted instance name regardless of execution order.
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.name < b.name; });
  std::ostringstream os;
  os << "name feasible D attained worst_margin\n";
  for (const auto& r : rows) os << r.line << "\n";
  res.report = os.str();
  return res;
}

}  // namespace blsub::cli
