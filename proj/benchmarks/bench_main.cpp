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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "incentive/audit.hpp"
#include "incentive/game_file.hpp"
#include "incentive/parser.hpp"

namespace incentive {
namespace {

const char* kFirst = R"([agents]
names = u1, u2
[costs]
u1 = "u1^2 - 2*u1*u2"
u2 = "u1*u2 - u2"
[operator]
cost = "(u1 - 3/4)^2 + (u2 - 2)^2"
[incentive]
kind = custom
mode = anticipatory
t.u1 = "u1^2"
t.u2 = "-1/2"
)";

GameSpec first() { return parse_game_spec(kFirst); }

// Three agents, quadratic costs.
Game three_agents() {
  const std::vector<std::string> names{"a", "b", "c"};
  auto p = [&](const char* text) { return parse_expression(text, names); };
  return Game(names, {p("2*a^2 + a*b - a"), p("b^2 - b*c/2 + b"), p("3*c^2 + a*c/4 - 2*c")},
              p("a^2 + b^2 + c^2 + a*b/2 - c"), Box(3));
}

// Same game with a non-polynomial term, so the floating path is used.
Game three_agents_nonsmooth() {
  const std::vector<std::string> names{"a", "b", "c"};
  auto p = [&](const char* text) { return parse_expression(text, names); };
  return Game(names, {p("2*a^2 + a*b - a + abs(a - 1)"), p("b^2 - b*c/2 + b"), p("3*c^2 + a*c/4 - 2*c")},
              p("a^2 + b^2 + c^2 + a*b/2 - c"), Box(3));
}

void BM_ParseGameFile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_game_spec(kFirst));
}
BENCHMARK(BM_ParseGameFile);

void BM_NashEquilibriumExact(benchmark::State& state) {
  const Game g = three_agents();
  const SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(nash_equilibrium(g.costs(), g.bounds(), cfg));
}
BENCHMARK(BM_NashEquilibriumExact)->Unit(benchmark::kMillisecond);

void BM_NashEquilibriumFloating(benchmark::State& state) {
  const Game g = three_agents_nonsmooth();
  const SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(nash_equilibrium(g.costs(), g.bounds(), cfg));
}
BENCHMARK(BM_NashEquilibriumFloating)->Unit(benchmark::kMillisecond);

void BM_GridOracle(benchmark::State& state) {
  const GameSpec s = first();
  SolverConfig cfg;
  cfg.grid_points_per_axis = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grid_nash_oracle(s.game.costs(), s.game.bounds(), cfg));
}
BENCHMARK(BM_GridOracle)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_ProportionalAllocation(benchmark::State& state) {
  const Game g = three_agents();
  const SolverConfig cfg;
  const OperatorOptimum optimum = minimize_operator(g, cfg);
  const auto baseline = nash_equilibrium(g.costs(), g.bounds(), cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(proportional_allocation(g, optimum.profile, baseline.front().profile));
  }
}
BENCHMARK(BM_ProportionalAllocation);

void BM_FullAudit(benchmark::State& state) {
  const GameSpec s = first();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        full_audit(AuditRequest{s.game, s.scheme, s.participation, s.declared_inner}, s.solver));
  }
}
BENCHMARK(BM_FullAudit)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace incentive

BENCHMARK_MAIN();
