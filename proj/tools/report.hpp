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

#ifndef BLSUB_TOOLS_REPORT_HPP_
#define BLSUB_TOOLS_REPORT_HPP_

#include <string>
#include <vector>

#include "blsub/linops.hpp"

namespace blsub::cli {

inline constexpr const char* kReportSchema = "blsub-report v1";

// Deterministic rendering: %.12g, infinities as the bare token `inf`, and no
// negative zeros.
std::string fmt(double v);

std::string fmt_subset(const std::vector<int>& s);  // {1,3} style, 1-based

std::string fmt_matrix(const Mat& m, const std::string& indent);

std::string yesno(bool b);

}  // namespace blsub::cli

#endif  // BLSUB_TOOLS_REPORT_HPP_
