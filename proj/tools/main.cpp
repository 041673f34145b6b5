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

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "blsub/errors.hpp"
#include "commands.hpp"
#include "instance.hpp"

namespace {

using blsub::cli::CommandOptions;
using blsub::cli::CommandResult;
using blsub::cli::Instance;

struct GlobalFlags {
  std::optional<double> tol_rank;
  std::optional<double> tol_eq;
  std::optional<int> grid_1d;
  std::optional<int> grid_2d;
  std::string out_path;
  std::string csv_path;
  CommandOptions opts;
};

Instance load(const std::string& path, const GlobalFlags& flags) {
  Instance inst = blsub::cli::parse_instance(path);
  if (flags.tol_rank) inst.tol_rank = *flags.tol_rank;
  if (flags.tol_eq) inst.tol_eq = *flags.tol_eq;
  if (flags.grid_1d) inst.grid_1d = *flags.grid_1d;
  if (flags.grid_2d) inst.grid_2d = *flags.grid_2d;
  return inst;
}

int emit(const CommandResult& res, const GlobalFlags& flags) {
  if (!flags.out_path.empty()) {
    std::ofstream out(flags.out_path);
    if (!out) {
      std::cerr << "error: cannot open '" << flags.out_path << "' for writing\n";
      return blsub::cli::kExitError;
    }
    out << res.report;
  } else {
    std::cout << res.report;
  }
  if (!flags.csv_path.empty() && !res.csv.empty()) {
    std::ofstream csv(flags.csv_path);
    if (!csv) {
      std::cerr << "error: cannot open '" << flags.csv_path << "' for writing\n";
      return blsub::cli::kExitError;
    }
    csv << res.csv;
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp constants, feasibility, frames and extremizers for rank-one "
               "product-integral / entropy-subadditivity problems, with grid-level "
               "verification of the underlying inequalities"};
  app.require_subcommand(1);

  GlobalFlags flags;
  double tol_rank = 0, tol_eq = 0;
  int grid_1d = 0, grid_2d = 0;
  app.add_option("--tol-rank", tol_rank, "Relative rank tolerance override")
      ->each([&](const std::string&) { flags.tol_rank = tol_rank; });
  app.add_option("--tol-eq", tol_eq, "Equality-vs-strict tolerance override")
      ->each([&](const std::string&) { flags.tol_eq = tol_eq; });
  app.add_option("--grid-1d", grid_1d, "1-dim grid resolution override")
      ->each([&](const std::string&) { flags.grid_1d = grid_1d; });
  app.add_option("--grid-2d", grid_2d, "2-dim grid resolution override")
      ->each([&](const std::string&) { flags.grid_2d = grid_2d; });
  app.add_option("--out", flags.out_path, "Write the report to a file instead of stdout");
  app.add_option("--csv", flags.csv_path, "Write scan series (heat flow, witness sweeps) as CSV");
  app.add_option("--jobs", flags.opts.jobs, "Corpus worker pool size")->check(CLI::PositiveNumber);
  app.add_flag("--timestamp", flags.opts.timestamp,
               "Include a wall-clock line (reports are byte-stable without it)");

  std::string instance_path, corpus_dir;
  app.fallthrough();  // global flags may follow the subcommand
  auto* feas = app.add_subcommand("feasibility", "Polytope membership and critical subsets");
  feas->add_option("instance", instance_path, "Instance file")->required();
  auto* cons = app.add_subcommand("constant", "Sharp constant D with its splitting tree");
  cons->add_option("instance", instance_path, "Instance file")->required();
  auto* fram = app.add_subcommand("frame", "Frame change-of-variables matrix R");
  fram->add_option("instance", instance_path, "Instance file")->required();
  auto* extr = app.add_subcommand("extremizers", "Extremizer structure per block");
  extr->add_option("instance", instance_path, "Instance file")->required();
  auto* veri = app.add_subcommand("verify", "Grid-level inequality verification");
  veri->add_option("instance", instance_path, "Instance file")->required();
  veri->add_option("--which", flags.opts.which, "entropy | bl | fisher | eigen | all")
      ->check(CLI::IsMember({"entropy", "bl", "fisher", "eigen", "all"}));
  auto* corp = app.add_subcommand("corpus", "Run every instance in a directory");
  corp->add_option("directory", corpus_dir, "Directory of .instance files")->required();

  CLI11_PARSE(app, argc, argv);
  flags.opts.want_csv = !flags.csv_path.empty();

  try {
    CommandResult res;
    if (corp->parsed()) {
      res = blsub::cli::cmd_corpus(corpus_dir, flags.opts);
    } else {
      const Instance inst = load(instance_path, flags);
      if (feas->parsed()) {
        res = blsub::cli::cmd_feasibility(inst, flags.opts);
      } else if (cons->parsed()) {
        res = blsub::cli::cmd_constant(inst, flags.opts);
      } else if (fram->parsed()) {
        res = blsub::cli::cmd_frame(inst, flags.opts);
      } else if (extr->parsed()) {
        res = blsub::cli::cmd_extremizers(inst, flags.opts);
      } else {
        res = blsub::cli::cmd_verify(inst, flags.opts);
      }
    }
    return emit(res, flags);
  } catch (const blsub::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return blsub::cli::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return blsub::cli::kExitError;
  }
}
