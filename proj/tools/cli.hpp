// Copyright 2026 The Incentive Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INCENTIVE_TOOLS_CLI_HPP_
#define INCENTIVE_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace incentive::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSpecError = 2;
inline constexpr int kExitSolverError = 3;
inline constexpr int kExitDimension = 4;

// Largest agent count the grid oracle accepts.
inline constexpr std::size_t kOracleMaxAgents = 4;

// Runs one command. `args` excludes the program name. Reports go to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace incentive::cli

#endif  // INCENTIVE_TOOLS_CLI_HPP_
