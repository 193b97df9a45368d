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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "incentive/report.hpp"

namespace incentive::cli {
namespace {

std::string game_path(const std::string& name) { return std::string(INCENTIVE_GAMES_DIR) + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

ReportDocument structured(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("structured");
  const Run r = run(args);
  REQUIRE(r.code == kExitOk);
  return parse_structured(r.out);
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("incentive_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::string> exact(const ReportDocument& profile) {
  std::vector<std::string> out;
  for (const auto& x : profile) out.push_back(x["exact"].is_null() ? "?" : x["exact"].get<std::string>());
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("audit of the first example") {
  const auto d = structured({"audit", game_path("example1.game")});
  const auto& e = d["equilibria"][0];
  CHECK(exact(e["realized"]["profile"]) == std::vector<std::string>{"1", "2"});
  CHECK(e["incentive_sum"]["exact"] == "1/2");
  const Run text = run({"audit", game_path("example1.game")});
  CHECK(text.code == kExitOk);
  CHECK(text.out.find("budget_balance") != std::string::npos);
}

TEST_CASE("audit of the third example flags the budget") {
  const auto d = structured({"audit", game_path("example3_case2.game")});
  const auto& props = d["equilibria"][0]["properties"];
  bool seen = false;
  for (const auto& p : props) {
    if (p["name"] == "budget_balance") {
      CHECK(p["holds"] == "no");
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("audit scenarios") {
  const auto base = structured({"audit", game_path("example1.game"), "--scenario", "baseline"});
  CHECK(base["scheme"].is_null());
  CHECK(base["equilibria"].empty());
  const auto out = structured({"audit", game_path("example1.game"), "--scenario", "optout:u2"});
  CHECK(out["opted_out"] == ReportDocument::array({"u2"}));
}

TEST_CASE("equilibrium rows") {
  const auto base = structured({"equilibrium", game_path("example1.game"), "--scenario", "baseline"});
  CHECK(exact(base["equilibria"][0]["profile"]) == std::vector<std::string>{"1", "1"});
  CHECK(base["equilibria"][0]["operator_net_cost"]["exact"] == "17/16");
  const auto opt = structured({"equilibrium", game_path("example1.game"), "--scenario", "optout:u2"});
  CHECK(exact(opt["equilibria"][0]["profile"]) == std::vector<std::string>{"1", "2"});
  const auto with = structured({"equilibrium", game_path("example1.game"), "--scenario", "incentive"});
  CHECK(with["equilibria"][0]["operator_net_cost"]["exact"] == "-7/16");
}

TEST_CASE("opt-out without an incentive is not applicable") {
  const std::string path = temp_file("plain.game", R"([agents]
names = u1, u2
[costs]
u1 = "u1^2 - 2*u1*u2"
u2 = "u1*u2 - u2"
[operator]
cost = "(u1 - 3/4)^2 + (u2 - 2)^2"
)");
  const Run r = run({"equilibrium", path, "--scenario", "optout:u1"});
  CHECK(r.code == kExitSpecError);
  CHECK(r.err.find("not applicable") != std::string::npos);
  CHECK(run({"equilibrium", path, "--scenario", "sideways"}).code == kExitSpecError);
}

TEST_CASE("malformed expression exits with a location") {
  const std::string path = temp_file("broken.game", "[agents]\nnames = a, b\n[costs]\na = \"a^^2\"\n");
  const Run r = run({"audit", path});
  CHECK(r.code == kExitSpecError);
  CHECK(r.err.find("broken.game:4:") != std::string::npos);
}

TEST_CASE("oracle agrees with the analytic pipeline") {
  const auto d = structured({"oracle", game_path("example1.game")});
  CHECK(d["equilibria_agree"] == true);
  CHECK(d["grid_equilibria"][0]["within_one_step"] == true);
  const auto third = structured({"oracle", game_path("example3_case1.game")});
  CHECK(third["optimum_agrees"] == true);
  CHECK(third["analytic_optimum"]["distance_to_grid"].get<double>() <= third["grid_step"].get<double>());
}

TEST_CASE("oracle refuses five agents") {
  const std::string path = temp_file("five.game", R"([agents]
names = a, b, c, d, e
[costs]
a = "a^2"
b = "b^2"
c = "c^2"
d = "d^2"
e = "e^2"
[operator]
cost = "a + b + c + d + e"
)");
  const Run r = run({"oracle", path});
  CHECK(r.code == kExitDimension);
}

TEST_CASE("oracle refuses a grid beyond its budget") {
  const std::string path = temp_file("four.game", R"([agents]
names = a, b, c, d
[costs]
a = "a^2"
b = "b^2"
c = "c^2"
d = "d^2"
[operator]
cost = "a^2 + b^2 + c^2 + d^2"
)");
  CHECK(run({"oracle", path}).code == kExitDimension);
  CHECK(run({"oracle", path, "--grid", "11"}).code == kExitOk);
}

TEST_CASE("flags reach the solver") {
  const auto d = structured({"oracle", game_path("example1.game"), "--grid", "41", "--tol", "1e-8"});
  CHECK(d["grid_points_per_axis"] == 41);
  CHECK(d["grid_step"].get<double>() == doctest::Approx(0.5));
  CHECK(run({"oracle", game_path("example1.game"), "--grid", "1"}).code == kExitSpecError);
  CHECK(run({"audit", game_path("example1.game"), "--format", "yaml"}).code == kExitSpecError);
}

TEST_CASE("solver failure exits with its own code") {
  const std::string path = temp_file("chase.game", R"([agents]
names = a, b
[costs]
a = "(a - b)^2"
b = "-(b - a)^2"
[operator]
cost = "a^2 + b^2"
[bounds]
a = [-1, 1]
b = [-1, 1]
)");
  CHECK(run({"equilibrium", path}).code == kExitSolverError);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitSpecError);
  CHECK(run({"dance", game_path("example1.game")}).code == kExitSpecError);
  CHECK(run({"audit", "/nonexistent.game"}).code == kExitSpecError);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("property: repeated runs give byte-identical structured output") {
  for (const char* file : {"example1.game", "example2.game", "example3_case2.game", "decoupled.game"}) {
    for (const char* command : {"audit", "equilibrium", "oracle"}) {
      const std::vector<std::string> args{command, game_path(file), "--format", "structured"};
      const Run a = run(args);
      const Run b = run(args);
      CHECK(a.code == kExitOk);
      CHECK(a.out == b.out);
      CHECK(render_structured(parse_structured(a.out)) == a.out);
    }
  }
}

}  // TEST_SUITE

}  // namespace incentive::cli
