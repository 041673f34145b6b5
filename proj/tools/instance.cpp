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

#include "instance.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "blsub/errors.hpp"

namespace blsub::cli {

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_reals(const std::string& line, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError("instance: bad number '" + tok + "' in " + where);
    }
  }
  return out;
}

}  // namespace

std::string Instance::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

Instance parse_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("instance: cannot open '" + path + "'");
  }
  Instance inst;
  {
    std::filesystem::path p(path);
    inst.name = p.stem().string();
    inst.dir = p.has_parent_path() ? p.parent_path().string() : ".";
  }

  enum class Section { kNone, kFamily, kWeights, kFiles, kTolerances };
  Section section = Section::kNone;
  bool have_n = false;
  std::vector<std::vector<double>> rows;
  std::vector<double> weights;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "line " + std::to_string(lineno);

    if (line.front() == '[') {
      if (line == "[family]") {
        section = Section::kFamily;
      } else if (line == "[weights]") {
        section = Section::kWeights;
      } else if (line == "[files]") {
        section = Section::kFiles;
      } else if (line == "[tolerances]") {
        section = Section::kTolerances;
      } else {
        throw InputError("instance: unknown section " + line + " at " + where);
      }
      continue;
    }

    switch (section) {
      case Section::kNone:
        throw InputError("instance: content before any section at " + where);
      case Section::kFamily: {
        const auto vals = parse_reals(line, where);
        if (!have_n) {
          if (vals.size() != 1 || vals[0] != static_cast<int>(vals[0]) || vals[0] < 1) {
            throw InputError("instance: [family] must start with the dimension n (" +
                             where + ")");
          }
          inst.n = static_cast<int>(vals[0]);
          have_n = true;
        } else {
          if (static_cast<int>(vals.size()) != inst.n) {
            throw InputError("instance: family row with " + std::to_string(vals.size()) +
                             " entries, expected " + std::to_string(inst.n) + " (" +
                             where + ")");
          }
          rows.push_back(vals);
        }
        break;
      }
      case Section::kWeights: {
        const auto vals = parse_reals(line, where);
        weights.insert(weights.end(), vals.begin(), vals.end());
        break;
      }
      case Section::kFiles: {
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
          throw InputError("instance: [files] lines are key = path (" + where + ")");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
          throw InputError("instance: empty path for '" + key + "' (" + where + ")");
        }
        if (key == "density") {
          if (inst.density_file) {
            throw InputError("instance: duplicate density entry (" + where + ")");
          }
          inst.density_file = value;
        } else if (key == "factor") {
          inst.factor_files.push_back(value);
        } else if (key == "potential") {
          inst.potential_files.push_back(value);
        } else {
          throw InputError("instance: unknown file key '" + key + "' (" + where + ")");
        }
        break;
      }
      case Section::kTolerances: {
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
          throw InputError("instance: [tolerances] lines are key = value (" + where + ")");
        }
        const std::string key = trim(line.substr(0, eq));
        const auto vals = parse_reals(trim(line.substr(eq + 1)), where);
        if (vals.size() != 1) {
          throw InputError("instance: tolerance '" + key + "' needs one value (" + where + ")");
        }
        if (key == "tol_rank") {
          inst.tol_rank = vals[0];
        } else if (key == "tol_eq") {
          inst.tol_eq = vals[0];
        } else if (key == "grid_1d") {
          inst.grid_1d = static_cast<int>(vals[0]);
        } else if (key == "grid_2d") {
          inst.grid_2d = static_cast<int>(vals[0]);
        } else {
          throw InputError("instance: unknown tolerance key '" + key + "' (" + where + ")");
        }
        break;
      }
    }
  }

  if (!have_n || rows.empty()) {
    throw InputError("instance: missing or empty [family] section");
  }
  inst.columns.resize(inst.n, static_cast<int>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (int i = 0; i < inst.n; ++i) {
      inst.columns(i, static_cast<int>(j)) = rows[j][static_cast<std::size_t>(i)];
    }
  }
  if (static_cast<int>(weights.size()) != inst.columns.cols()) {
    throw InputError("instance: [weights] has " + std::to_string(weights.size()) +
                     " entries for " + std::to_string(inst.columns.cols()) + " columns");
  }
  inst.weights.resize(static_cast<int>(weights.size()));
  for (std::size_t j = 0; j < weights.size(); ++j) {
    inst.weights(static_cast<int>(j)) = weights[j];
  }
  return inst;
}

}  // namespace blsub::cli
