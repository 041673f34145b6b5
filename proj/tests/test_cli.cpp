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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "blsub/grid.hpp"
#include "commands.hpp"
#include "instance.hpp"
#include "report.hpp"

using namespace blsub;
namespace fs = std::filesystem;

namespace {

const std::string kCorpusDir = BLSUB_CORPUS_DIR;

std::string write_temp(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "blsub_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << body;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr const char* kOrthoBody =
    "# test instance\n"
    "[family]\n"
    "2\n"
    "1 0\n"
    "0 1\n"
    "[weights]\n"
    "1 1\n";

}  // namespace

TEST_CASE("number formatting is deterministic and folds special values") {
  CHECK(cli::fmt(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(cli::fmt(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(cli::fmt(-0.0) == "0");
  CHECK(cli::fmt(0.6931471805599453) == "0.69314718056");
  CHECK(cli::fmt_subset({0, 2}) == "{1,3}");
}

TEST_CASE("instance files parse, with sections and comments") {
  const std::string path = write_temp(
      "full.instance",
      "# header comment\n"
      "[family]\n"
      "2\n"
      "1 0\n"
      "0 1\n"
      "1 1\n"
      "[weights]\n"
      "0.5 0.5\n"
      "1\n"
      "[files]\n"
      "density = d.grid\n"
      "factor = f1.grid\n"
      "factor = f2.grid\n"
      "potential = v1.grid\n"
      "[tolerances]\n"
      "tol_eq = 1e-8\n"
      "grid_2d = 128\n");
  const auto inst = cli::parse_instance(path);
  CHECK(inst.name == "full");
  CHECK(inst.n == 2);
  CHECK(inst.columns.cols() == 3);
  CHECK(inst.columns(0, 2) == 1.0);
  CHECK(inst.weights(2) == 1.0);
  CHECK(inst.density_file.has_value());
  CHECK(inst.factor_files.size() == 2);
  CHECK(inst.potential_files.size() == 1);
  CHECK(inst.tol_eq == 1e-8);
  CHECK(inst.grid_2d == 128);
}

TEST_CASE("instance parse failures carry the offending line") {
  CHECK_THROWS_AS(cli::parse_instance(write_temp("nofam.instance", "[weights]\n1\n")),
                  InputError);
  CHECK_THROWS_AS(
      cli::parse_instance(write_temp(
          "badnum.instance", "[family]\n2\n1 0\n0 x\n[weights]\n1 1\n")),
      InputError);
  CHECK_THROWS_AS(
      cli::parse_instance(write_temp(
          "badcount.instance", "[family]\n2\n1 0\n0 1\n[weights]\n1 1 1\n")),
      InputError);
  CHECK_THROWS_AS(cli::parse_instance("/nonexistent/path.instance"), InputError);
}

TEST_CASE("feasibility command exit codes") {
  const auto ok = cli::cmd_feasibility(cli::parse_instance(write_temp("ok.instance", kOrthoBody)));
  CHECK(ok.exit_code == cli::kExitOk);
  CHECK(ok.report.find("in_KA yes") != std::string::npos);

  const auto bad = cli::cmd_feasibility(cli::parse_instance(write_temp(
      "bad.instance", "[family]\n2\n1 0\n0 1\n[weights]\n1 0.5\n")));
  CHECK(bad.exit_code == cli::kExitInfeasible);
  CHECK(bad.report.find("in_KA no") != std::string::npos);
  CHECK(bad.report.find("witness kind=dilation") != std::string::npos);
}

TEST_CASE("constant command renders the tree deterministically") {
  const auto inst = cli::parse_instance(write_temp(
      "split.instance", "[family]\n2\n1 0\n1 0\n0 1\n[weights]\n0.5 0.5 1\n"));
  const auto a = cli::cmd_constant(inst);
  const auto b = cli::cmd_constant(inst);
  CHECK(a.exit_code == cli::kExitOk);
  CHECK(a.report == b.report);  // byte-identical reruns
  CHECK(a.report.find("D 0\n") != std::string::npos);
  CHECK(a.report.find("split dim=2") != std::string::npos);
  CHECK(a.report.find("recession {3}") != std::string::npos);
}

TEST_CASE("frame and extremizers commands") {
  const auto inst = cli::parse_instance(write_temp("ortho.instance", kOrthoBody));
  const auto fr = cli::cmd_frame(inst);
  CHECK(fr.exit_code == cli::kExitOk);
  CHECK(fr.report.find("exists yes") != std::string::npos);

  const auto ex = cli::cmd_extremizers(inst);
  CHECK(ex.exit_code == cli::kExitOk);
  CHECK(ex.report.find("free") != std::string::npos);

  const auto none = cli::cmd_frame(cli::parse_instance(write_temp(
      "shear.instance", "[family]\n2\n1 0\n0 1\n1 1\n[weights]\n0.5 0.5 1\n")));
  CHECK(none.exit_code == cli::kExitOk);
  CHECK(none.report.find("exists no") != std::string::npos);
  CHECK(none.report.find("certificate {3}") != std::string::npos);
}

TEST_CASE("verify on the bundled mercedes instance holds everywhere") {
  const auto inst = cli::parse_instance(kCorpusDir + "/mercedes.instance");
  cli::CommandOptions opts;
  opts.which = "all";
  const auto res = cli::cmd_verify(inst, opts);
  INFO(res.report);
  CHECK(res.exit_code == cli::kExitOk);
  CHECK(res.report.find("entropy:") != std::string::npos);
  CHECK(res.report.find("verdict=equality") != std::string::npos);
  CHECK(res.report.find("violated") == std::string::npos);

  // Re-running produces identical bytes.
  const auto again = cli::cmd_verify(inst, opts);
  CHECK(res.report == again.report);
}

TEST_CASE("verify --which bl on the orthonormal instance is a Fubini equality") {
  const auto inst = cli::parse_instance(kCorpusDir + "/orthonormal2.instance");
  cli::CommandOptions opts;
  opts.which = "bl";
  const auto res = cli::cmd_verify(inst, opts);
  CHECK(res.exit_code == cli::kExitOk);
  CHECK(res.report.find("bl: lhs=") != std::string::npos);
  CHECK(res.report.find("ratio=1 ") != std::string::npos);
  CHECK(res.report.find("verdict=equality") != std::string::npos);
  CHECK(res.report.find("entropy:") == std::string::npos);  // only the requested block
}

TEST_CASE("verify emits the heat-flow scan as CSV when asked") {
  const auto inst = cli::parse_instance(kCorpusDir + "/corr_gauss.instance");
  cli::CommandOptions opts;
  opts.which = "entropy";
  opts.want_csv = true;
  const auto res = cli::cmd_verify(inst, opts);
  CHECK(res.exit_code == cli::kExitOk);
  CHECK(res.csv.rfind("t,info_gap\n", 0) == 0);
  CHECK(std::count(res.csv.begin(), res.csv.end(), '\n') == 6);  // header + 5 rows
}

TEST_CASE("verify skips blocks that lack data in all mode, errors when explicit") {
  const auto inst = cli::parse_instance(write_temp("ortho2.instance", kOrthoBody));
  cli::CommandOptions all;
  all.which = "all";
  const auto res = cli::cmd_verify(inst, all);
  CHECK(res.exit_code == cli::kExitOk);
  CHECK(res.report.find("skipped (no density file)") != std::string::npos);

  cli::CommandOptions ent;
  ent.which = "entropy";
  CHECK(cli::cmd_verify(inst, ent).exit_code == cli::kExitError);
}

TEST_CASE("verify reports infeasibility and skips the blocks") {
  const auto inst = cli::parse_instance(write_temp(
      "inf.instance", "[family]\n2\n1 0\n0 1\n[weights]\n0.5 0.5\n"));
  cli::CommandOptions opts;
  const auto res = cli::cmd_verify(inst, opts);
  CHECK(res.exit_code == cli::kExitInfeasible);
  CHECK(res.report.find("D inf") != std::string::npos);
  CHECK(res.report.find("blocks skipped") != std::string::npos);
}

TEST_CASE("corpus run matches the checked-in golden summary") {
  const auto res = cli::cmd_corpus(kCorpusDir);
  CHECK(res.exit_code == cli::kExitOk);
  const std::string golden = slurp(kCorpusDir + "/golden_summary.txt");
  REQUIRE(!golden.empty());
  CHECK(res.report == golden);
}

TEST_CASE("corpus handles empty and partially corrupt directories") {
  const fs::path dir = fs::temp_directory_path() / "blsub_corpus_empty";
  fs::create_directories(dir);
  for (const auto& e : fs::directory_iterator(dir)) fs::remove(e.path());
  const auto empty = cli::cmd_corpus(dir.string());
  CHECK(empty.exit_code == cli::kExitOk);
  CHECK(empty.report == "name feasible D attained worst_margin\n");

  const fs::path mixed = fs::temp_directory_path() / "blsub_corpus_mixed";
  fs::create_directories(mixed);
  for (const auto& e : fs::directory_iterator(mixed)) fs::remove(e.path());
  {
    std::ofstream good(mixed / "good.instance");
    good << kOrthoBody;
    std::ofstream bad(mixed / "broken.instance");
    bad << "[family]\n2\n1 garbage\n";
  }
  const auto res = cli::cmd_corpus(mixed.string());
  CHECK(res.exit_code == cli::kExitOk);
  CHECK(res.report.find("broken parse-error - - -") != std::string::npos);
  CHECK(res.report.find("good yes 0 yes -") != std::string::npos);

  const auto missing = cli::cmd_corpus("/nonexistent/corpus/dir");
  CHECK(missing.exit_code == cli::kExitError);
}

TEST_CASE("corpus parallel run is byte-identical to the serial one") {
  cli::CommandOptions serial;
  serial.jobs = 1;
  cli::CommandOptions parallel;
  parallel.jobs = 2;
  // A lightweight directory so the test stays fast.
  const fs::path dir = fs::temp_directory_path() / "blsub_corpus_par";
  fs::create_directories(dir);
  for (const auto& e : fs::directory_iterator(dir)) fs::remove(e.path());
  for (const char* name : {"a", "b", "c", "d"}) {
    std::ofstream f(dir / (std::string(name) + ".instance"));
    f << kOrthoBody;
  }
  const auto s = cli::cmd_corpus(dir.string(), serial);
  const auto p = cli::cmd_corpus(dir.string(), parallel);
  CHECK(s.report == p.report);
}

TEST_CASE("grid file round trip preserves geometry and values") {
  grid::Grid g = grid::make_grid(2, {grid::Axis{-1, 2, 8}, grid::Axis{0, 1, 4}, grid::Axis{}});
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = 0.001 * static_cast<double>(i);
  std::stringstream ss;
  grid::write_grid(ss, g);
  const grid::Grid back = grid::read_grid(ss);
  CHECK(grid::same_geometry(g, back));
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    CHECK(back.values[i] == doctest::Approx(g.values[i]).epsilon(1e-12));
  }
}
