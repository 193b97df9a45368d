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

#ifndef INCENTIVE_GAME_FILE_HPP_
#define INCENTIVE_GAME_FILE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "incentive/game.hpp"
#include "incentive/incentive.hpp"
#include "incentive/solve.hpp"

namespace incentive {

// A malformed game file. what() reads "source:line:column: message"; line
// and column are 1-based.
class GameFileError : public std::runtime_error {
 public:
  GameFileError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

// Everything a game file declares.
struct GameSpec {
  Game game;
  std::optional<IncentiveScheme> scheme;
  ParticipationSet participation;
  // Inner function of an operator cost of the form |inner(U) - inner(U*)|.
  std::optional<Expression> declared_inner;
  SolverConfig solver;
};

// INI-style format. Lines starting with '#' or ';' are comments.
//
//   [agents]
//   names = u1, u2                 agent names double as variable names
//   [costs]
//   u1 = "u1^2 - 2*u1*u2"          one quoted expression per agent
//   [operator]
//   cost = "(u1 - 3/4)^2 + (u2 - 2)^2"
//   [bounds]                       optional, default [-10, 10]
//   u1 = [-10, 10]
//   [incentive]                    optional
//   kind = custom                  custom | proportional | vcg
//   mode = anticipatory            anticipatory | non-anticipatory
//   t.u1 = "u1^2"                  custom only, one per agent
//   declared_inner = "u1 + u2"     optional
//   opted_out = u2                 optional, comma separated
//   [solver]                       optional SolverConfig overrides
//   grid_points_per_axis = 201
GameSpec parse_game_spec(std::string_view text, const std::string& source = "<input>");
// Throws GameFileError (line 0) when the file cannot be read.
GameSpec load_game_spec(const std::filesystem::path& path);

}  // namespace incentive

#endif  // INCENTIVE_GAME_FILE_HPP_
