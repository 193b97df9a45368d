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

#include "cli.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "incentive/audit.hpp"
#include "incentive/game_file.hpp"
#include "incentive/report.hpp"

namespace incentive::cli {
namespace {

// A command-line request that cannot apply to the given file.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The oracle's refusal of a too large instance.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string path;
  std::string format = "text";
  std::string scenario;
  std::optional<int> grid;
  std::optional<double> tol;
};

struct Selector {
  enum class Kind { kBaseline, kIncentive, kOptOut };
  Kind kind = Kind::kBaseline;
  std::size_t agent = 0;
};

Selector parse_selector(const std::string& text, const GameSpec& spec) {
  if (text == "baseline") return {Selector::Kind::kBaseline, 0};
  if (text == "incentive" || text.rfind("optout:", 0) == 0) {
    if (!spec.scheme) throw UsageError("scenario '" + text + "' is not applicable: the file declares no incentive");
  }
  if (text == "incentive") return {Selector::Kind::kIncentive, 0};
  if (text.rfind("optout:", 0) == 0) {
    const std::string name = text.substr(7);
    const auto& names = spec.game.agent_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UsageError("unknown agent '" + name + "' in scenario selector");
    return {Selector::Kind::kOptOut, static_cast<std::size_t>(it - names.begin())};
  }
  throw UsageError("unknown scenario '" + text + "' (expected baseline, incentive or optout:<agent>)");
}

GameSpec load(const Options& o) {
  GameSpec spec = load_game_spec(o.path);
  if (o.grid) spec.solver.grid_points_per_axis = *o.grid;
  if (o.tol) {
    spec.solver.tol_fixed_point = *o.tol;
    spec.solver.tol_stationarity = *o.tol;
  }
  try {
    spec.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

void emit(const ReportDocument& doc, const Options& o, std::ostream& out) {
  out << (o.format == "structured" ? render_structured(doc) : render_text(doc));
}

// The scenario's incentive functions and agent model.
Scenario incentive_scenario(const GameSpec& spec, const OperatorOptimum& optimum) {
  const Materialization m = materialize(spec.game, *spec.scheme, optimum.profile, spec.solver);
  return Scenario(spec.game, m.incentive, spec.participation, spec.scheme->mode);
}

ReportDocument audit_command(const Options& o) {
  const GameSpec spec = load(o);
  const Selector sel = parse_selector(o.scenario.empty() ? (spec.scheme ? "incentive" : "baseline") : o.scenario, spec);
  AuditRequest req{spec.game, spec.scheme, spec.participation, spec.declared_inner};
  if (sel.kind == Selector::Kind::kBaseline) req.scheme.reset();
  if (sel.kind == Selector::Kind::kOptOut) req.participation.opted_out.insert(sel.agent);
  return to_document(full_audit(req, spec.solver));
}

ReportDocument equilibrium_command(const Options& o) {
  const GameSpec spec = load(o);
  const std::string selector = o.scenario.empty() ? "baseline" : o.scenario;
  const Selector sel = parse_selector(selector, spec);
  const Game& g = spec.game;

  ScenarioRow row;
  row.scenario = selector;
  row.agents = g.agent_names();
  std::optional<Scenario> s;
  if (sel.kind == Selector::Kind::kBaseline) {
    s.emplace(g);
    row.equilibria = nash_equilibrium(g.costs(), g.bounds(), spec.solver);
  } else {
    const OperatorOptimum optimum = minimize_operator(g, spec.solver);
    s.emplace(incentive_scenario(spec, optimum));
    if (sel.kind == Selector::Kind::kIncentive) {
      row.equilibria = nash_equilibrium(effective_costs(*s), g.bounds(), spec.solver);
    } else {
      if (auto e = opt_out_equilibrium(*s, sel.agent, spec.solver)) row.equilibria.push_back(std::move(*e));
      ParticipationSet out = s->participation();
      out.opted_out.insert(sel.agent);
      s.emplace(s->with_participation(std::move(out)));
    }
  }
  if (row.equilibria.empty()) throw NoEquilibriumError("no verified equilibrium for scenario '" + selector + "'");
  for (const auto& e : row.equilibria) {
    row.operator_net_cost.push_back(operator_net_cost(*s, e.profile));
    std::vector<Number> costs;
    for (const auto& c : g.costs()) costs.push_back(evaluate(c, e.profile.values()));
    row.agent_costs.push_back(std::move(costs));
  }
  return to_document(row);
}

ReportDocument oracle_command(const Options& o) {
  const GameSpec spec = load(o);
  const Game& g = spec.game;
  if (g.size() > kOracleMaxAgents) {
    throw DimensionError("the grid oracle handles at most " + std::to_string(kOracleMaxAgents) + " agents, got " +
                         std::to_string(g.size()));
  }
  const std::string selector = o.scenario.empty() ? "baseline" : o.scenario;
  const Selector sel = parse_selector(selector, spec);
  if (sel.kind == Selector::Kind::kOptOut) throw UsageError("the oracle compares the baseline or incentive scenario");

  OracleComparison c;
  c.scenario = selector;
  c.agents = g.agent_names();
  c.grid_points_per_axis = spec.solver.grid_points_per_axis;
  c.grid_step = grid_step(g.bounds(), spec.solver.grid_points_per_axis);
  c.analytic_optimum = minimize_operator(g, spec.solver);
  std::vector<Expression> costs = g.costs();
  if (sel.kind == Selector::Kind::kIncentive) costs = effective_costs(incentive_scenario(spec, c.analytic_optimum));
  try {
    c.grid_equilibria = grid_nash_oracle(costs, g.bounds(), spec.solver);
    c.grid_minimizers = grid_minimizers(g.operator_cost(), g.bounds(), spec.solver);
  } catch (const SolverError& e) {
    throw DimensionError(e.what());
  }
  c.analytic_equilibria = nash_equilibrium(costs, g.bounds(), spec.solver);
  return to_document(c);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit incentive schemes on continuous games"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", o.path, "Game file")->required();
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
    sub->add_option("--scenario", o.scenario, "baseline, incentive or optout:<agent>");
    sub->add_option("--grid", o.grid, "Grid points per axis");
    sub->add_option("--tol", o.tol, "Solver tolerance");
  };
  CLI::App* audit = app.add_subcommand("audit", "Full property audit of the file's incentive scheme");
  CLI::App* equilibrium = app.add_subcommand("equilibrium", "Equilibria and operator net cost of one scenario");
  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force grid equilibria next to the analytic solver");
  for (CLI::App* sub : {audit, equilibrium, oracle}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSpecError;
  }

  try {
    ReportDocument doc;
    if (audit->parsed()) {
      doc = audit_command(o);
    } else if (equilibrium->parsed()) {
      doc = equilibrium_command(o);
    } else {
      doc = oracle_command(o);
    }
    emit(doc, o, out);
    return kExitOk;
  } catch (const GameFileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSpecError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSpecError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDimension;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolverError;
  }
}

}  // namespace incentive::cli
