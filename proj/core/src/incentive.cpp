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

#include "incentive/incentive.hpp"

#include <string>

namespace incentive {
namespace {

// Clamps tiny negative values to zero and rejects clearly negative ones.
Number nonnegative(Number v, const char* what) {
  if (!(v < Number(0))) return v;
  if (v.value() >= -kNegativeCostSlack) return v.is_exact() ? Number(0) : Number::inexact(0.0);
  throw SolverQualityError(std::string(what) + " is negative (" + v.to_string() +
                           "); the operator optimum is not optimal");
}

Number proportional_threshold() { return Number(Rational(1, 1000000000000LL)); }

}  // namespace

std::string_view to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::kProportional:
      return "proportional";
    case SchemeKind::kVcg:
      return "vcg";
    case SchemeKind::kCustom:
      return "custom";
  }
  return "unknown";
}

Number marginal_cost(const Game& g, const ActionProfile& u_star, std::size_t i, const Number& u_ri) {
  std::vector<Number> moved = u_star.values();
  moved.at(i) = u_ri;
  const Expression& j = g.operator_cost();
  return nonnegative(evaluate(j, moved) - evaluate(j, u_star.values()), "marginal cost");
}

Number excess_cost(const Game& g, const ActionProfile& u_star, const ActionProfile& u_r) {
  const Expression& j = g.operator_cost();
  return nonnegative(evaluate(j, u_r.values()) - evaluate(j, u_star.values()), "excess cost");
}

CostDecomposition decompose(const Game& g, const ActionProfile& u_star, const ActionProfile& u_r) {
  CostDecomposition d;
  d.u_star = u_star;
  d.u_realized = u_r;
  for (std::size_t i = 0; i < g.size(); ++i) d.theta.push_back(marginal_cost(g, u_star, i, u_r[i]));
  d.excess = excess_cost(g, u_star, u_r);
  return d;
}

std::vector<Number> proportional_allocation(const CostDecomposition& d) {
  Number total(0);
  for (const auto& th : d.theta) total += th;
  std::vector<Number> t;
  for (const auto& th : d.theta) {
    if (total.value() <= kProportionalGuard) {
      t.emplace_back(0);
    } else {
      t.push_back(th * d.excess / total);
    }
  }
  return t;
}

std::vector<Number> proportional_allocation(const Game& g, const ActionProfile& u_star, const ActionProfile& u_r) {
  return proportional_allocation(decompose(g, u_star, u_r));
}

Expression proportional_as_expression(const Game& g, const ActionProfile& u_star, std::size_t i) {
  const Expression& j = g.operator_cost();
  const std::size_t n = g.size();
  const Number at_optimum = evaluate(j, u_star.values());
  std::vector<Expression> theta;
  for (std::size_t k = 0; k < n; ++k) {
    Expression moved = j;
    for (std::size_t m = 0; m < n; ++m) {
      if (m != k) moved = substitute(moved, VarId{m}, Expression(u_star[m]));
    }
    theta.push_back(moved - Expression(at_optimum));
  }
  const Expression total = Expression::sum(theta);
  const Expression excess = j - Expression(at_optimum);
  return Expression::guarded_quotient(theta.at(i) * excess, total, total, proportional_threshold());
}

std::optional<EquilibriumResult> opt_out_equilibrium(const Scenario& s, std::size_t i, const SolverConfig& cfg) {
  ParticipationSet out = s.participation();
  out.opted_out.insert(i);
  const auto eqs = nash_equilibrium(effective_costs(s.with_participation(out)), s.game().bounds(), cfg);
  if (eqs.empty()) return std::nullopt;
  return eqs.front();
}

std::vector<Expression> vcg_opt_out_costs(const Game& g, std::size_t i) {
  std::vector<Expression> costs(g.size(), g.operator_cost());
  costs.at(i) = g.cost(i);
  return costs;
}

Materialization materialize(const Game& g, const IncentiveScheme& scheme, const ActionProfile& u_star,
                            const SolverConfig& cfg) {
  Materialization m;
  switch (scheme.kind) {
    case SchemeKind::kCustom:
      if (scheme.custom.size() != g.size()) throw GameError("one custom incentive is required per agent");
      m.incentive = scheme.custom;
      break;
    case SchemeKind::kProportional:
      for (std::size_t i = 0; i < g.size(); ++i) m.incentive.push_back(proportional_as_expression(g, u_star, i));
      break;
    case SchemeKind::kVcg:
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto eqs = nash_equilibrium(vcg_opt_out_costs(g, i), g.bounds(), cfg);
        if (eqs.empty()) {
          throw NoEquilibriumError("no verified equilibrium when agent " + g.agent_names()[i] + " opts out");
        }
        const Expression rest = g.operator_cost() - g.cost(i);
        const Number constant = evaluate(rest, eqs.front().profile.values());
        m.vcg_opt_out.push_back(eqs.front());
        m.vcg_constants.push_back(constant);
        m.incentive.push_back(rest - Expression(constant));
      }
      break;
  }
  return m;
}

std::vector<IncentiveOutcome> realized_outcomes(const Game& g, const IncentiveScheme& scheme,
                                                const ParticipationSet& participation,
                                                const OperatorOptimum& optimum,
                                                std::span<const EquilibriumResult> baseline,
                                                const SolverConfig& cfg) {
  Materialization m = materialize(g, scheme, optimum.profile, cfg);
  const Scenario s(g, m.incentive, participation, scheme.mode);
  const bool anticipatory = scheme.mode == Anticipation::kAnticipatory;

  std::vector<EquilibriumResult> realized;
  if (anticipatory) {
    realized = nash_equilibrium(effective_costs(s), g.bounds(), cfg);
    if (realized.empty()) throw NoEquilibriumError("no verified equilibrium with the incentive in place");
  } else {
    realized.assign(baseline.begin(), baseline.end());
    if (realized.empty()) throw NoEquilibriumError("no verified baseline equilibrium");
  }

  std::vector<std::optional<EquilibriumResult>> opt_out(g.size());
  if (anticipatory) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!participation.participates(i)) continue;
      if (scheme.kind == SchemeKind::kVcg) {
        opt_out[i] = m.vcg_opt_out[i];
      } else {
        opt_out[i] = opt_out_equilibrium(s, i, cfg);
      }
    }
  }

  std::vector<IncentiveOutcome> outcomes;
  for (const auto& eq : realized) {
    IncentiveOutcome o;
    o.scheme = scheme;
    o.incentive = m.incentive;
    o.participation = participation;
    o.realized = eq;
    o.vcg_constants = m.vcg_constants;
    o.decomposition = decompose(g, optimum.profile, eq.profile);
    if (scheme.kind == SchemeKind::kProportional) {
      o.t = proportional_allocation(o.decomposition);
    } else {
      for (const auto& t : m.incentive) o.t.push_back(evaluate(t, eq.profile.values()));
    }
    o.opt_out = opt_out;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!participation.participates(i)) {
        o.t[i] = Number(0);
        o.opt_out[i] = eq;
      } else if (!anticipatory) {
        // Agents that ignore the rule act the same whether in or out.
        o.opt_out[i] = eq;
      }
    }
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

IncentiveOutcome vcg_incentive(const Game& g, const SolverConfig& cfg) {
  const OperatorOptimum optimum = minimize_operator(g, cfg);
  const IncentiveScheme scheme{SchemeKind::kVcg, Anticipation::kAnticipatory, {}};
  return realized_outcomes(g, scheme, ParticipationSet{}, optimum, {}, cfg).front();
}

}  // namespace incentive
