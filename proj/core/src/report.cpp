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

#include "incentive/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

namespace incentive {
namespace {

double clean(double v) { return v == 0.0 ? 0.0 : v; }

ReportDocument numbers(std::span<const Number> xs) {
  ReportDocument out = ReportDocument::array();
  for (const auto& x : xs) out.push_back(to_document(x));
  return out;
}

ReportDocument agent_ref(std::optional<std::size_t> agent, std::span<const std::string> agents) {
  if (!agent) return nullptr;
  return *agent < agents.size() ? ReportDocument(agents[*agent]) : ReportDocument(*agent);
}

ReportDocument expressions(std::span<const Expression> es, std::span<const std::string> names) {
  ReportDocument out = ReportDocument::array();
  for (const auto& e : es) out.push_back(to_string(e, names));
  return out;
}

std::string anticipation_name(Anticipation a) {
  return a == Anticipation::kAnticipatory ? "anticipatory" : "non-anticipatory";
}

ReportDocument optional_number(const std::optional<Number>& x) {
  return x ? to_document(*x) : ReportDocument(nullptr);
}

// ---- Text rendering ----

bool is_number_object(const ReportDocument& d) {
  return d.is_object() && d.size() == 2 && d.contains("value") && d.contains("exact");
}

bool is_inline(const ReportDocument& d);

bool is_inline_array(const ReportDocument& d) {
  return d.is_array() && !d.empty() &&
         std::all_of(d.begin(), d.end(), [](const ReportDocument& x) { return is_inline(x) && !x.is_array(); });
}

bool is_inline(const ReportDocument& d) {
  if (d.is_primitive()) return true;
  if (is_number_object(d)) return true;
  if (d.is_array()) return d.empty() || is_inline_array(d);
  return false;
}

// Strings too long to share one line.
bool is_text_list(const ReportDocument& d) {
  return d.is_array() && !d.empty() &&
         std::all_of(d.begin(), d.end(), [](const ReportDocument& x) { return x.is_string(); }) &&
         std::any_of(d.begin(), d.end(), [](const ReportDocument& x) { return x.get<std::string>().size() > 40; });
}

bool is_flat_record(const ReportDocument& d) {
  return d.is_object() && !is_number_object(d) &&
         std::all_of(d.begin(), d.end(), [](const ReportDocument& x) { return is_inline(x); });
}

std::string inline_text(const ReportDocument& d) {
  if (d.is_null()) return "-";
  if (d.is_boolean()) return d.get<bool>() ? "yes" : "no";
  if (d.is_string()) return d.get<std::string>();
  if (d.is_number_integer()) return d.dump();
  if (d.is_number()) return format_double(d.get<double>());
  if (is_number_object(d)) return number_text(d);
  if (d.is_array()) {
    if (d.empty()) return "-";
    std::string out = "(";
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (k) out += ", ";
      out += inline_text(d[k]);
    }
    return out + ")";
  }
  return d.dump();
}

void render_table(const ReportDocument& rows, std::size_t indent, std::ostringstream& out) {
  std::vector<std::string> columns;
  for (const auto& row : rows) {
    for (const auto& item : row.items()) {
      if (std::find(columns.begin(), columns.end(), item.key()) == columns.end()) columns.push_back(item.key());
    }
  }
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  for (const auto& c : columns) width.push_back(c.size());
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      line.push_back(row.contains(columns[c]) ? inline_text(row[columns[c]]) : "-");
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string text(indent, ' ');
    for (std::size_t c = 0; c < line.size(); ++c) {
      text += line[c];
      if (c + 1 < line.size()) text += std::string(width[c] - line[c].size() + 2, ' ');
    }
    out << text << '\n';
  };
  emit(columns);
  std::vector<std::string> rule;
  for (const auto w : width) rule.emplace_back(w, '-');
  emit(rule);
  for (const auto& line : cells) emit(line);
}

void render_object(const ReportDocument& obj, std::size_t indent, std::ostringstream& out) {
  std::size_t width = 0;
  for (const auto& item : obj.items()) {
    if (is_inline(item.value())) width = std::max(width, item.key().size());
  }
  const std::string pad(indent, ' ');
  for (const auto& item : obj.items()) {
    const ReportDocument& v = item.value();
    if (is_text_list(v)) {
      out << pad << item.key() << ":\n";
      for (const auto& s : v) out << pad << "  - " << s.get<std::string>() << '\n';
    } else if (is_inline(v)) {
      out << pad << item.key() << std::string(width - item.key().size() + 2, ' ') << inline_text(v) << '\n';
    } else if (v.is_object()) {
      out << pad << item.key() << ":\n";
      render_object(v, indent + 2, out);
    } else if (std::all_of(v.begin(), v.end(), [](const ReportDocument& x) { return is_flat_record(x); })) {
      out << pad << item.key() << ":\n";
      render_table(v, indent + 2, out);
    } else {
      for (std::size_t k = 0; k < v.size(); ++k) {
        out << pad << item.key() << "[" << k << "]:";
        if (is_inline(v[k])) {
          out << ' ' << inline_text(v[k]) << '\n';
        } else if (v[k].is_object()) {
          out << '\n';
          render_object(v[k], indent + 2, out);
        } else {
          out << '\n';
          render_object(ReportDocument{{"items", v[k]}}, indent + 2, out);
        }
      }
    }
  }
}

}  // namespace

ReportDocument to_document(const Number& x) {
  ReportDocument out;
  out["value"] = clean(x.value());
  out["exact"] = x.is_exact() ? ReportDocument(to_string(x.exact())) : ReportDocument(nullptr);
  return out;
}

ReportDocument to_document(const ActionProfile& u) { return numbers(u.values()); }

ReportDocument to_document(const EquilibriumResult& e) {
  ReportDocument out;
  out["profile"] = to_document(e.profile);
  out["residual"] = clean(e.residual);
  out["method"] = std::string(to_string(e.method));
  out["converged"] = e.converged;
  out["on_boundary"] = e.on_boundary;
  return out;
}

ReportDocument to_document(const Witness& w, std::span<const std::string> agents) {
  ReportDocument out;
  out["label"] = w.label;
  out["agent"] = agent_ref(w.agent, agents);
  out["other_agent"] = agent_ref(w.other_agent, agents);
  out["profile"] = w.profile ? to_document(*w.profile) : ReportDocument(nullptr);
  out["lhs"] = to_document(w.lhs);
  out["relation"] = w.relation;
  out["rhs"] = to_document(w.rhs);
  out["satisfied"] = w.satisfied;
  return out;
}

ReportDocument to_document(const PropertyVerdict& v, std::span<const std::string> agents) {
  ReportDocument out;
  out["name"] = v.name;
  out["holds"] = std::string(to_string(v.holds));
  out["tolerance"] = v.tolerance_used;
  out["level"] = v.level.empty() ? ReportDocument(nullptr) : ReportDocument(v.level);
  out["strict"] = v.strict ? ReportDocument(*v.strict) : ReportDocument(nullptr);
  out["condition"] = v.condition ? ReportDocument(*v.condition) : ReportDocument(nullptr);
  out["condition_holds"] = v.condition_holds ? ReportDocument(*v.condition_holds) : ReportDocument(nullptr);
  out["detail"] = v.detail;
  out["witnesses"] = ReportDocument::array();
  for (const auto& w : v.witnesses) out["witnesses"].push_back(to_document(w, agents));
  return out;
}

ReportDocument to_document(const ConditionCheck& c, std::span<const std::string> agents) {
  ReportDocument out;
  out["name"] = c.name;
  out["status"] = std::string(to_string(c.status));
  out["detail"] = c.detail;
  out["witnesses"] = ReportDocument::array();
  for (const auto& w : c.witnesses) out["witnesses"].push_back(to_document(w, agents));
  return out;
}

ReportDocument to_document(const AuditReport& r) {
  const auto& names = r.agent_names;
  ReportDocument out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "audit";
  out["agents"] = names;
  if (r.scheme) {
    ReportDocument s;
    s["kind"] = std::string(to_string(r.scheme->kind));
    s["mode"] = anticipation_name(r.scheme->mode);
    s["custom"] = expressions(r.scheme->custom, names);
    out["scheme"] = std::move(s);
  } else {
    out["scheme"] = nullptr;
  }
  ReportDocument opted = ReportDocument::array();
  for (const auto i : r.participation.opted_out) opted.push_back(names.at(i));
  out["opted_out"] = std::move(opted);

  ReportDocument optimum;
  optimum["profile"] = to_document(r.optimum.profile);
  optimum["value"] = to_document(r.optimum.value);
  optimum["on_boundary"] = r.optimum.on_boundary;
  out["optimum"] = std::move(optimum);

  ReportDocument baseline = ReportDocument::array();
  for (std::size_t k = 0; k < r.baseline.size(); ++k) {
    ReportDocument b = to_document(r.baseline[k]);
    b["operator_cost"] = to_document(r.baseline_operator_cost.at(k));
    baseline.push_back(std::move(b));
  }
  out["baseline"] = std::move(baseline);

  out["game_conditions"] = ReportDocument::array();
  for (const auto& c : r.game_conditions) out["game_conditions"].push_back(to_document(c, names));
  out["decoupled_impossibility"] = to_document(r.decoupled, names);

  out["equilibria"] = ReportDocument::array();
  for (const auto& a : r.equilibria) {
    const auto& o = a.outcome;
    ReportDocument e;
    e["realized"] = to_document(o.realized);
    e["incentive_functions"] = expressions(o.incentive, names);
    e["incentives"] = numbers(o.t);
    Number sum_t;
    for (const auto& t : o.t) sum_t += t;
    e["incentive_sum"] = to_document(sum_t);
    e["marginal_costs"] = numbers(o.decomposition.theta);
    e["excess_cost"] = to_document(o.decomposition.excess);
    e["agent_costs"] = numbers(a.agent_costs);
    e["effective_costs"] = numbers(a.effective_costs);
    e["operator_net_cost"] = to_document(a.operator_net_cost);
    ReportDocument opt_out = ReportDocument::array();
    for (std::size_t i = 0; i < o.opt_out.size(); ++i) {
      ReportDocument row;
      row["agent"] = names.at(i);
      row["profile"] = o.opt_out[i] ? to_document(o.opt_out[i]->profile) : ReportDocument(nullptr);
      row["agent_cost"] =
          i < a.opt_out_agent_cost.size() ? optional_number(a.opt_out_agent_cost[i]) : ReportDocument(nullptr);
      row["operator_net_cost"] =
          i < a.opt_out_operator_cost.size() ? optional_number(a.opt_out_operator_cost[i]) : ReportDocument(nullptr);
      row["vcg_constant"] = i < o.vcg_constants.size() ? to_document(o.vcg_constants[i]) : ReportDocument(nullptr);
      opt_out.push_back(std::move(row));
    }
    e["opt_out"] = std::move(opt_out);
    e["tolerance"] = a.tolerance;
    e["properties"] = ReportDocument::array();
    for (const auto& p : a.properties) e["properties"].push_back(to_document(p, names));
    e["conditions"] = ReportDocument::array();
    for (const auto& c : a.conditions) e["conditions"].push_back(to_document(c, names));
    e["guarantees"] = ReportDocument::array();
    for (const auto& g : a.guarantees) e["guarantees"].push_back(to_document(g, names));
    out["equilibria"].push_back(std::move(e));
  }
  out["notes"] = r.notes;
  return out;
}

ReportDocument to_document(const ScenarioRow& row) {
  ReportDocument out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "equilibrium";
  out["scenario"] = row.scenario;
  out["agents"] = row.agents;
  out["equilibria"] = ReportDocument::array();
  for (std::size_t k = 0; k < row.equilibria.size(); ++k) {
    ReportDocument e = to_document(row.equilibria[k]);
    e["agent_costs"] = numbers(row.agent_costs.at(k));
    e["operator_net_cost"] = to_document(row.operator_net_cost.at(k));
    out["equilibria"].push_back(std::move(e));
  }
  return out;
}

ReportDocument to_document(const OracleComparison& c) {
  ReportDocument out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "oracle";
  out["scenario"] = c.scenario;
  out["agents"] = c.agents;
  out["grid_points_per_axis"] = c.grid_points_per_axis;
  out["grid_step"] = c.grid_step;

  // Distance from each point of one set to the nearest point of the other.
  auto nearest = [](const ActionProfile& p, const std::vector<ActionProfile>& others) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : others) best = std::min(best, distance_inf(p, o));
    return best;
  };
  auto distance_doc = [](double d) { return std::isfinite(d) ? ReportDocument(d) : ReportDocument(nullptr); };
  std::vector<ActionProfile> analytic;
  for (const auto& e : c.analytic_equilibria) analytic.push_back(e.profile);
  const double slack = c.grid_step * (1.0 + 1e-9);

  bool agree = true;
  out["grid_equilibria"] = ReportDocument::array();
  for (const auto& g : c.grid_equilibria) {
    const double d = nearest(g, analytic);
    agree = agree && d <= slack;
    out["grid_equilibria"].push_back({{"profile", to_document(g)},
                                      {"distance_to_analytic", distance_doc(d)},
                                      {"within_one_step", d <= slack}});
  }
  out["analytic_equilibria"] = ReportDocument::array();
  for (const auto& e : c.analytic_equilibria) {
    const double d = nearest(e.profile, c.grid_equilibria);
    agree = agree && d <= slack;
    out["analytic_equilibria"].push_back({{"profile", to_document(e.profile)},
                                          {"method", std::string(to_string(e.method))},
                                          {"distance_to_grid", distance_doc(d)},
                                          {"within_one_step", d <= slack}});
  }
  out["grid_minimizers"] = ReportDocument::array();
  for (const auto& g : c.grid_minimizers) out["grid_minimizers"].push_back(to_document(g));
  const double d_opt = nearest(c.analytic_optimum.profile, c.grid_minimizers);
  out["analytic_optimum"] = {{"profile", to_document(c.analytic_optimum.profile)},
                             {"value", to_document(c.analytic_optimum.value)},
                             {"distance_to_grid", distance_doc(d_opt)},
                             {"within_one_step", d_opt <= slack}};
  out["equilibria_agree"] = agree;
  out["optimum_agrees"] = d_opt <= slack;
  return out;
}

std::string render_structured(const ReportDocument& doc) { return doc.dump(2) + "\n"; }

ReportDocument parse_structured(std::string_view text) { return ReportDocument::parse(text); }

std::string render_text(const ReportDocument& doc) {
  std::ostringstream out;
  render_object(doc, 0, out);
  return out.str();
}

std::string number_text(const ReportDocument& number) {
  if (number.is_null()) return "-";
  const auto& exact = number.at("exact");
  if (exact.is_string()) {
    if (const auto r = parse_rational(exact.get<std::string>())) return Number(*r).to_string();
  }
  return format_double(number.at("value").get<double>());
}

}  // namespace incentive
