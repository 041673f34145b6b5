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

#ifndef BLSUB_TOOLS_INSTANCE_HPP_
#define BLSUB_TOOLS_INSTANCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "blsub/linops.hpp"

namespace blsub::cli {

// A parsed instance file: family, weights, optional data files, tolerance
// overrides. Sections are [family] (n, then m rows of n reals), [weights]
// (m reals), [files] (key = path), [tolerances] (key = value); '#' comments.
struct Instance {
  std::string name;
  std::string dir;  // directory of the instance file, for relative paths
  int n = 0;
  Mat columns;
  Vec weights;

  std::optional<std::string> density_file;
  std::vector<std::string> factor_files;
  std::vector<std::string> potential_files;

  double tol_rank = 1e-9;
  double tol_eq = 1e-9;
  int grid_1d = 2048;
  int grid_2d = 256;

  std::string resolve(const std::string& path) const;
};

Instance parse_instance(const std::string& path);

}  // namespace blsub::cli

#endif  // BLSUB_TOOLS_INSTANCE_HPP_
