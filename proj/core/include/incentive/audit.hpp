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

#ifndef INCENTIVE_AUDIT_HPP_
#define INCENTIVE_AUDIT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "incentive/game.hpp"
#include "incentive/incentive.hpp"
#include "incentive/solve.hpp"

namespace incentive {

// Equality tolerances: exact pipelines versus pipelines that went through
// floating iteration.
inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kFloatingTolerance = 1e-6;

// One checked inequality `lhs relation rhs`, optionally tied to agents and a
// profile.
struct Witness {
  std::string label;
  std::optional<std::size_t> agent;
  std::optional<std::size_t> other_agent;
  std::optional<ActionProfile> profile;
  Number lhs;
  Number rhs;
  std::string relation;
  bool satisfied = true;
};

enum class Holds { kYes, kNo, kConditional, kNotApplicable };
std::string_view to_string(Holds h);

struct PropertyVerdict {
  std::string name;
  Holds holds = Holds::kNotApplicable;
  std::vector<Witness> witnesses;
  double tolerance_used = 0.0;
  // Budget balance: "exact", "weak" or "none".
  std::string level;
  // Budget balance: whether the weak inequality is strict.
  std::optional<bool> strict;
  // Conditional guarantees: the condition and its truth on this instance.
  std::optional<std::string> condition;
  std::optional<bool> condition_holds;
  std::string detail;
};

enum class ConditionStatus { kHolds, kHoldsOnSamples, kFails, kUnknown, kNotApplicable };
std::string_view to_string(ConditionStatus s);

struct ConditionCheck {
  std::string name;
  ConditionStatus status = ConditionStatus::kUnknown;
  std::vector<Witness> witnesses;
  std::string detail;

  // Holds or holds on every sample.
  bool satisfied() const {
    return status == ConditionStatus::kHolds || status == ConditionStatus::kHoldsOnSamples;
  }
};

// Observed properties of one outcome.
PropertyVerdict check_social_optimality(const IncentiveOutcome& o, const ActionProfile& u_star, double tol);
PropertyVerdict check_budget_balance(const IncentiveOutcome& o, double tol);
PropertyVerdict check_participation_anticipatory(const IncentiveOutcome& o, const Game& g, double tol);
PropertyVerdict check_participation_weak(const CostDecomposition& d, std::span<const Number> t, double tol);
std::pair<PropertyVerdict, PropertyVerdict> check_equity_monotonicity(const CostDecomposition& d,
                                                                      std::span<const Number> t,
                                                                      double tol_theta, double tol_t);

// Excess cost at most the sum of marginal costs. When it fails, no rule can
// give non-anticipatory agents both participation and budget balance.
ConditionCheck check_excess_bound(const CostDecomposition& d, double tol);

// Sufficient conditions for the excess bound: separable J; J declared as
// |inner(U) - inner(U*)| with separable inner; J(U* with u_i from the
// baseline) >= J(baseline) for every agent and baseline equilibrium.
std::vector<ConditionCheck> check_excess_bound_sufficient_conditions(
    const Game& g, const ActionProfile& u_star, std::span<const EquilibriumResult> baseline,
    const std::optional<Expression>& declared_inner, double tol);

// VCG-like rule: positive definite operator Hessian (social optimality) and,
// per agent, (J - C_i)(U*) - (J - C_i)(opt-out_i) >= 0 (weak budget balance).
std::vector<ConditionCheck> check_vcg_conditions(const Game& g, const IncentiveOutcome& o, const SolverConfig& cfg,
                                                 double tol);

// Every C_i depends on u_i alone; then participation forces sum(t) <= 0, so
// weak budget balance with a positive excess is out of reach.
PropertyVerdict check_decoupled_impossibility(const Game& g);

// Proportional rule with anticipatory agents: C_i(U) + t_i(U) >= C_i(U*) on
// a grid plus pseudo-random profiles, sufficient for social optimality.
ConditionCheck check_alignment_sufficiency(const Game& g, const ActionProfile& u_star,
                                           std::span<const Expression> incentive, std::size_t random_samples,
                                           double tol);

struct AuditRequest {
  Game game;
  std::optional<IncentiveScheme> scheme;
  ParticipationSet participation;
  std::optional<Expression> declared_inner;
};

struct EquilibriumAudit {
  IncentiveOutcome outcome;
  double tolerance = kExactTolerance;
  std::vector<Number> agent_costs;
  std::vector<Number> effective_costs;
  // J(U) minus the incentives of participants, at the realized profile.
  Number operator_net_cost;
  // Same quantity at each agent's opt-out profile (empty entry when none).
  std::vector<std::optional<Number>> opt_out_operator_cost;
  // C_i at agent i's opt-out profile.
  std::vector<std::optional<Number>> opt_out_agent_cost;
  std::vector<PropertyVerdict> properties;
  std::vector<ConditionCheck> conditions;
  // The scheme's guarantee pattern instantiated on this instance.
  std::vector<PropertyVerdict> guarantees;
};

struct AuditReport {
  std::vector<std::string> agent_names;
  std::optional<IncentiveScheme> scheme;
  ParticipationSet participation;
  OperatorOptimum optimum;
  std::vector<EquilibriumResult> baseline;
  std::vector<Number> baseline_operator_cost;
  std::vector<ConditionCheck> game_conditions;
  PropertyVerdict decoupled;
  std::vector<EquilibriumAudit> equilibria;
  std::vector<std::string> notes;
};

// Runs optimum, baseline equilibria, outcomes and every check. Throws
// NoEquilibriumError when the incentive scenario has no verified equilibrium,
// or the baseline has none and agents do not anticipate the incentive.
AuditReport full_audit(const AuditRequest& request, const SolverConfig& cfg);

}  // namespace incentive

#endif  // INCENTIVE_AUDIT_HPP_
