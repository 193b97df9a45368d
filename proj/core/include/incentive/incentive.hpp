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

#ifndef INCENTIVE_INCENTIVE_HPP_
#define INCENTIVE_INCENTIVE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "incentive/expression.hpp"
#include "incentive/game.hpp"
#include "incentive/solve.hpp"

namespace incentive {

// The optimum used to measure costs is inconsistent with a realized profile
// (a marginal or excess cost came out clearly negative).
class SolverQualityError : public SolverError {
 public:
  using SolverError::SolverError;
};

// No verified equilibrium exists for a scenario that requires one.
class NoEquilibriumError : public SolverError {
 public:
  using SolverError::SolverError;
};

enum class SchemeKind { kProportional, kVcg, kCustom };
std::string_view to_string(SchemeKind k);

struct IncentiveScheme {
  SchemeKind kind = SchemeKind::kCustom;
  Anticipation mode = Anticipation::kAnticipatory;
  // kCustom only: one t_i(U) per agent.
  std::vector<Expression> custom;
};

// Zero-denominator guard of the proportional rule.
inline constexpr double kProportionalGuard = 1e-12;
// Negative marginal or excess costs down to this value are treated as zero.
inline constexpr double kNegativeCostSlack = 1e-9;

struct CostDecomposition {
  ActionProfile u_star;
  ActionProfile u_realized;
  std::vector<Number> theta;
  Number excess;
};

// J(U* with coordinate i replaced by u_ri) - J(U*).
Number marginal_cost(const Game& g, const ActionProfile& u_star, std::size_t i, const Number& u_ri);
// J(U_r) - J(U*).
Number excess_cost(const Game& g, const ActionProfile& u_star, const ActionProfile& u_r);
CostDecomposition decompose(const Game& g, const ActionProfile& u_star, const ActionProfile& u_r);

// t_i = theta_i * excess / sum(theta), all zero when sum(theta) is at most
// kProportionalGuard.
std::vector<Number> proportional_allocation(const CostDecomposition& d);
std::vector<Number> proportional_allocation(const Game& g, const ActionProfile& u_star, const ActionProfile& u_r);

// The same rule as a function of the realized profile U, with the guard
// built into the expression.
Expression proportional_as_expression(const Game& g, const ActionProfile& u_star, std::size_t i);

// Equilibrium of `s` after agent i leaves the scheme: i minimizes C_i, every
// other participant its effective cost. The lexicographically first verified
// equilibrium is returned; nullopt when none verifies.
std::optional<EquilibriumResult> opt_out_equilibrium(const Scenario& s, std::size_t i, const SolverConfig& cfg);

// Costs of the opt-out game for agent i under the VCG-like rule: C_i for i,
// J for every participant (incentives differ from J - C_j by constants only).
std::vector<Expression> vcg_opt_out_costs(const Game& g, std::size_t i);

// The symbolic incentives of a scheme for a given optimum.
struct Materialization {
  std::vector<Expression> incentive;
  // VCG only: per agent the opt-out equilibrium and the constant
  // (J - C_i) evaluated there.
  std::vector<EquilibriumResult> vcg_opt_out;
  std::vector<Number> vcg_constants;
};
// Throws NoEquilibriumError when a VCG opt-out game has no verified
// equilibrium.
Materialization materialize(const Game& g, const IncentiveScheme& scheme, const ActionProfile& u_star,
                            const SolverConfig& cfg);

struct IncentiveOutcome {
  IncentiveScheme scheme;
  std::vector<Expression> incentive;
  ParticipationSet participation;
  // U' for anticipatory agents, the baseline equilibrium otherwise.
  EquilibriumResult realized;
  // Incentives at the realized profile; zero for agents outside the scheme.
  std::vector<Number> t;
  // Per agent, the profile reached when that agent alone leaves the scheme.
  std::vector<std::optional<EquilibriumResult>> opt_out;
  std::vector<Number> vcg_constants;
  CostDecomposition decomposition;
};

// One outcome per realized equilibrium, in lexicographic order of the
// realized profile. `baseline` is the no-incentive equilibrium set and
// anchors the non-anticipatory case. Throws NoEquilibriumError when the
// anticipatory game has no verified equilibrium.
std::vector<IncentiveOutcome> realized_outcomes(const Game& g, const IncentiveScheme& scheme,
                                                const ParticipationSet& participation,
                                                const OperatorOptimum& optimum,
                                                std::span<const EquilibriumResult> baseline,
                                                const SolverConfig& cfg);

// Full VCG-like pipeline for anticipatory agents: optimum, opt-out games,
// constants, and the first equilibrium with everybody participating.
IncentiveOutcome vcg_incentive(const Game& g, const SolverConfig& cfg);

}  // namespace incentive

#endif  // INCENTIVE_INCENTIVE_HPP_
