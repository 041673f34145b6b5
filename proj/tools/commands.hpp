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

#ifndef BLSUB_TOOLS_COMMANDS_HPP_
#define BLSUB_TOOLS_COMMANDS_HPP_

#include <string>

#include "instance.hpp"

namespace blsub::cli {

// Exit-code contract: 0 success, 1 internal/numeric error, 2 infeasible
// instance, 3 inconclusive verification.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitInconclusive = 3;

struct CommandOptions {
  std::string which = "all";  // verify: entropy | bl | fisher | eigen | all
  int jobs = 1;               // corpus worker pool
  bool timestamp = false;     // opt-in wall-clock line (breaks determinism)
  bool want_csv = false;      // emit scan series
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string report;
  std::string csv;  // scan series, when requested and available
};

CommandResult cmd_feasibility(const Instance& inst, const CommandOptions& opts = {});
CommandResult cmd_constant(const Instance& inst, const CommandOptions& opts = {});
CommandResult cmd_frame(const Instance& inst, const CommandOptions& opts = {});
CommandResult cmd_extremizers(const Instance& inst, const CommandOptions& opts = {});
CommandResult cmd_verify(const Instance& inst, const CommandOptions& opts = {});
CommandResult cmd_corpus(const std::string& directory, const CommandOptions& opts = {});

}  // namespace blsub::cli

#endif  // BLSUB_TOOLS_COMMANDS_HPP_
