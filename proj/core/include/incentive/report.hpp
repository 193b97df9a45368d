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

#ifndef INCENTIVE_REPORT_HPP_
#define INCENTIVE_REPORT_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "incentive/audit.hpp"

namespace incentive {

// Field names are stable within a schema version; see docs/report-schema.md.
inline constexpr int kReportSchemaVersion = 1;

// Key order is preserved, so serialization is deterministic.
using ReportDocument = nlohmann::ordered_json;

// {"value": <double>, "exact": "p/q" or null}.
ReportDocument to_document(const Number& x);
ReportDocument to_document(const ActionProfile& u);
ReportDocument to_document(const EquilibriumResult& e);
ReportDocument to_document(const Witness& w, std::span<const std::string> agents);
ReportDocument to_document(const PropertyVerdict& v, std::span<const std::string> agents);
ReportDocument to_document(const ConditionCheck& c, std::span<const std::string> agents);
ReportDocument to_document(const AuditReport& r);

// Rows of the scenario notation table: the equilibria of one scenario with
// the operator's net cost at each.
struct ScenarioRow {
  std::string scenario;
  std::vector<std::string> agents;
  std::vector<EquilibriumResult> equilibria;
  std::vector<Number> operator_net_cost;
  std::vector<std::vector<Number>> agent_costs;
};
ReportDocument to_document(const ScenarioRow& row);

// Brute-force grid results next to the analytic pipeline.
struct OracleComparison {
  std::string scenario;
  std::vector<std::string> agents;
  int grid_points_per_axis = 0;
  double grid_step = 0.0;
  std::vector<ActionProfile> grid_equilibria;
  std::vector<EquilibriumResult> analytic_equilibria;
  std::vector<ActionProfile> grid_minimizers;
  OperatorOptimum analytic_optimum;
};
ReportDocument to_document(const OracleComparison& c);

// Indented structured text; parse_structured inverts it exactly.
std::string render_structured(const ReportDocument& doc);
ReportDocument parse_structured(std::string_view text);

// Aligned human-readable rendering: key/value columns for scalars, tables for
// arrays of flat records.
std::string render_text(const ReportDocument& doc);

// Number written by to_document, as text with 12 significant digits and the
// exact annotation.
std::string number_text(const ReportDocument& number);

}  // namespace incentive

#endif  // INCENTIVE_REPORT_HPP_
