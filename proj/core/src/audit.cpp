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

#include "incentive/audit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace incentive {
namespace {

Witness make_witness(std::string label, Number lhs, std::string relation, Number rhs, bool satisfied) {
  Witness w;
  w.label = std::move(label);
  w.lhs = std::move(lhs);
  w.rhs = std::move(rhs);
  w.relation = std::move(relation);
  w.satisfied = satisfied;
  return w;
}

// a >= b - tol.
bool at_least(const Number& a, const Number& b, double tol) { return (a - b).value() >= -tol; }
bool close(const Number& a, const Number& b, double tol) { return std::fabs((a - b).value()) <= tol; }

Number sum(std::span<const Number> values) {
  Number s(0);
  for (const auto& v : values) s += v;
  return s;
}

bool exact_profile(const std::optional<EquilibriumResult>& e) { return !e || e->profile.is_exact(); }

double tolerance_for(const OperatorOptimum& opt, const IncentiveOutcome& o) {
  bool exact = opt.profile.is_exact() && o.realized.profile.is_exact();
  for (const auto& e : o.opt_out) exact = exact && exact_profile(e);
  for (const auto& t : o.t) exact = exact && t.is_exact();
  return exact ? kExactTolerance : kFloatingTolerance;
}

std::vector<std::vector<double>> sample_profiles(const Box& box, std::size_t random_samples) {
  const std::size_t n = box.size();
  int per_axis = 11;
  while (per_axis > 2 && std::pow(per_axis, static_cast<double>(n)) > 5000.0) --per_axis;
  std::vector<std::vector<double>> out;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = box[i].lower() + (box[i].upper() - box[i].lower()) * idx[i] / (per_axis - 1);
    }
    out.push_back(std::move(p));
    std::size_t d = 0;
    while (d < n && ++idx[d] == per_axis) idx[d++] = 0;
    if (d == n) break;
  }
  std::mt19937_64 rng(0x5eed);
  for (std::size_t k = 0; k < random_samples; ++k) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_real_distribution<double> u(box[i].lower(), box[i].upper());
      p[i] = u(rng);
    }
    out.push_back(std::move(p));
  }
  return out;
}

PropertyVerdict guarantee(std::string name, Holds holds, std::optional<std::string> condition = std::nullopt,
                          std::optional<bool> condition_holds = std::nullopt, std::string detail = {}) {
  PropertyVerdict v;
  v.name = std::move(name);
  v.holds = holds;
  v.condition = std::move(condition);
  v.condition_holds = condition_holds;
  v.detail = std::move(detail);
  return v;
}

const ConditionCheck* find_condition(std::span<const ConditionCheck> checks, std::string_view name) {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

std::string_view to_string(Holds h) {
  switch (h) {
    case Holds::kYes:
      return "yes";
    case Holds::kNo:
      return "no";
    case Holds::kConditional:
      return "conditional";
    case Holds::kNotApplicable:
      return "not-applicable";
  }
  return "unknown";
}

std::string_view to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::kHolds:
      return "holds";
    case ConditionStatus::kHoldsOnSamples:
      return "holds-on-samples";
    case ConditionStatus::kFails:
      return "fails";
    case ConditionStatus::kUnknown:
      return "unknown";
    case ConditionStatus::kNotApplicable:
      return "not-applicable";
  }
  return "unknown";
}

PropertyVerdict check_social_optimality(const IncentiveOutcome& o, const ActionProfile& u_star, double tol) {
  PropertyVerdict v;
  v.name = "social_optimality";
  v.tolerance_used = tol;
  const auto& u = o.realized.profile;
  std::size_t worst = 0;
  double gap = -1.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = std::fabs((u[i] - u_star[i]).value());
    if (d > gap) {
      gap = d;
      worst = i;
    }
  }
  const bool ok = gap <= tol;
  Witness w = make_witness("realized action vs optimal action", u[worst], "=", u_star[worst], ok);
  w.agent = worst;
  w.profile = u;
  v.witnesses.push_back(std::move(w));
  v.holds = ok ? Holds::kYes : Holds::kNo;
  return v;
}

PropertyVerdict check_budget_balance(const IncentiveOutcome& o, double tol) {
  PropertyVerdict v;
  v.name = "budget_balance";
  v.tolerance_used = tol;
  const Number total = sum(o.t);
  const Number& excess = o.decomposition.excess;
  if (close(total, excess, tol)) {
    v.holds = Holds::kYes;
    v.level = "exact";
    v.strict = false;
    v.witnesses.push_back(make_witness("sum of incentives vs excess cost", total, "=", excess, true));
  } else if (at_least(total, excess, tol)) {
    v.holds = Holds::kYes;
    v.level = "weak";
    v.strict = true;
    v.witnesses.push_back(make_witness("sum of incentives vs excess cost", total, ">=", excess, true));
  } else {
    v.holds = Holds::kNo;
    v.level = "none";
    v.strict = false;
    v.witnesses.push_back(make_witness("sum of incentives vs excess cost", total, ">=", excess, false));
  }
  return v;
}

PropertyVerdict check_participation_anticipatory(const IncentiveOutcome& o, const Game& g, double tol) {
  PropertyVerdict v;
  v.name = "participation_anticipatory";
  v.tolerance_used = tol;
  bool all = true, complete = true;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!o.participation.participates(i)) continue;
    if (!o.opt_out[i]) {
      complete = false;
      continue;
    }
    const Number outside = evaluate(g.cost(i), o.opt_out[i]->profile.values());
    const Number inside = evaluate(g.cost(i), o.realized.profile.values()) + o.t[i];
    const bool ok = at_least(outside, inside, tol);
    Witness w = make_witness("cost when opting out vs cost plus incentive when participating", outside, ">=",
                             inside, ok);
    w.agent = i;
    w.profile = o.opt_out[i]->profile;
    v.witnesses.push_back(std::move(w));
    all = all && ok;
  }
  if (!all) {
    v.holds = Holds::kNo;
  } else if (!complete) {
    v.holds = Holds::kNotApplicable;
    v.detail = "an opt-out game has no verified equilibrium";
  } else {
    v.holds = Holds::kYes;
  }
  return v;
}

PropertyVerdict check_participation_weak(const CostDecomposition& d, std::span<const Number> t, double tol) {
  PropertyVerdict v;
  v.name = "participation_weak";
  v.tolerance_used = tol;
  bool all = true;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const bool ok = at_least(d.theta[i], t[i], tol);
    Witness w = make_witness("incentive vs marginal cost", t[i], "<=", d.theta[i], ok);
    w.agent = i;
    v.witnesses.push_back(std::move(w));
    all = all && ok;
  }
  v.holds = all ? Holds::kYes : Holds::kNo;
  return v;
}

std::pair<PropertyVerdict, PropertyVerdict> check_equity_monotonicity(const CostDecomposition& d,
                                                                      std::span<const Number> t,
                                                                      double tol_theta, double tol_t) {
  PropertyVerdict equity, mono;
  equity.name = "equity";
  mono.name = "monotonicity";
  equity.tolerance_used = mono.tolerance_used = tol_t;
  bool equity_ok = true, mono_ok = true;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (i == j) continue;
      const bool theta_equal = close(d.theta[i], d.theta[j], tol_theta);
      if (i < j && theta_equal) {
        const bool ok = close(t[i], t[j], tol_t);
        if (!ok) {
          Witness w = make_witness("equal marginal costs, incentives", t[i], "=", t[j], false);
          w.agent = i;
          w.other_agent = j;
          equity.witnesses.push_back(std::move(w));
          equity_ok = false;
        }
      }
      if (at_least(d.theta[i], d.theta[j], tol_theta)) {
        const bool ok = at_least(t[i], t[j], tol_t);
        if (!ok) {
          Witness w = make_witness("larger marginal cost, incentives", t[i], ">=", t[j], false);
          w.agent = i;
          w.other_agent = j;
          mono.witnesses.push_back(std::move(w));
          mono_ok = false;
        }
      }
    }
  }
  equity.holds = equity_ok ? Holds::kYes : Holds::kNo;
  mono.holds = mono_ok ? Holds::kYes : Holds::kNo;
  return {equity, mono};
}

ConditionCheck check_excess_bound(const CostDecomposition& d, double tol) {
  ConditionCheck c;
  c.name = "excess_within_marginal_sum";
  const Number total = sum(d.theta);
  const bool ok = at_least(total, d.excess, tol);
  Witness w = make_witness("excess cost vs sum of marginal costs", d.excess, "<=", total, ok);
  w.profile = d.u_realized;
  c.witnesses.push_back(std::move(w));
  c.status = ok ? ConditionStatus::kHolds : ConditionStatus::kFails;
  if (!ok) {
    c.detail = "no rule gives non-anticipatory agents both participation and budget balance here";
  }
  return c;
}

std::vector<ConditionCheck> check_excess_bound_sufficient_conditions(
    const Game& g, const ActionProfile& u_star, std::span<const EquilibriumResult> baseline,
    const std::optional<Expression>& declared_inner, double tol) {
  std::vector<ConditionCheck> out;
  const std::size_t n = g.size();
  const Expression& j = g.operator_cost();

  ConditionCheck separable;
  separable.name = "separable_operator_cost";
  switch (separable_decomposition(j, n).status) {
    case Separability::Status::kSeparable:
      separable.status = ConditionStatus::kHolds;
      break;
    case Separability::Status::kNotSeparable:
      separable.status = ConditionStatus::kFails;
      separable.detail = "the operator cost has a cross term";
      break;
    case Separability::Status::kUnknown:
      separable.status = ConditionStatus::kUnknown;
      break;
  }
  out.push_back(std::move(separable));

  ConditionCheck declared;
  declared.name = "declared_absolute_form";
  if (!declared_inner) {
    declared.status = ConditionStatus::kNotApplicable;
    declared.detail = "no inner cost declared";
  } else {
    const Separability inner = separable_decomposition(*declared_inner, n);
    if (inner.status != Separability::Status::kSeparable) {
      declared.status = ConditionStatus::kFails;
      declared.detail = "the declared inner cost is not separable";
    } else {
      const double inner_star = evaluate(*declared_inner, u_star.doubles());
      declared.status = ConditionStatus::kHoldsOnSamples;
      for (const auto& p : sample_profiles(g.bounds(), 64)) {
        double rebuilt = -inner_star;
        for (const auto& term : inner.terms) rebuilt += evaluate(term, p);
        rebuilt = std::fabs(rebuilt);
        const double actual = evaluate(j, p);
        if (std::fabs(actual - rebuilt) > tol * std::max(1.0, std::fabs(actual))) {
          declared.status = ConditionStatus::kFails;
          Witness w = make_witness("operator cost vs |inner(U) - inner(U*)|", Number::inexact(actual), "=",
                                   Number::inexact(rebuilt), false);
          w.profile = ActionProfile::from_doubles(p);
          declared.witnesses.push_back(std::move(w));
          break;
        }
      }
    }
  }
  out.push_back(std::move(declared));

  ConditionCheck marginal;
  marginal.name = "marginal_profiles_dominate_baseline";
  if (baseline.empty()) {
    marginal.status = ConditionStatus::kUnknown;
    marginal.detail = "no baseline equilibrium";
  } else {
    marginal.status = ConditionStatus::kHolds;
    for (const auto& eq : baseline) {
      const Number at_baseline = evaluate(j, eq.profile.values());
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Number> moved = u_star.values();
        moved[i] = eq.profile[i];
        const Number at_moved = evaluate(j, moved);
        const bool ok = at_least(at_moved, at_baseline, tol);
        Witness w = make_witness("operator cost with one baseline action vs at the baseline", at_moved, ">=",
                                 at_baseline, ok);
        w.agent = i;
        w.profile = ActionProfile(moved);
        marginal.witnesses.push_back(std::move(w));
        if (!ok) marginal.status = ConditionStatus::kFails;
      }
    }
  }
  out.push_back(std::move(marginal));
  return out;
}

std::vector<ConditionCheck> check_vcg_conditions(const Game& g, const IncentiveOutcome& o, const SolverConfig& cfg,
                                                 double tol) {
  std::vector<ConditionCheck> out;
  ConditionCheck pd;
  pd.name = "operator_hessian_positive_definite";
  const DefinitenessVerdict h = hessian_pd_check(g.operator_cost(), g.bounds(), cfg);
  switch (h.status) {
    case DefinitenessVerdict::Status::kHolds:
      pd.status = ConditionStatus::kHolds;
      break;
    case DefinitenessVerdict::Status::kHoldsOnSamples:
      pd.status = ConditionStatus::kHoldsOnSamples;
      break;
    case DefinitenessVerdict::Status::kFails:
      pd.status = ConditionStatus::kFails;
      break;
    case DefinitenessVerdict::Status::kUnknown:
      pd.status = ConditionStatus::kUnknown;
      break;
  }
  if (h.status != DefinitenessVerdict::Status::kUnknown) {
    Witness w = make_witness("smallest Hessian eigenvalue", Number::inexact(h.min_eigenvalue), ">", Number(0),
                             pd.satisfied());
    w.profile = h.witness;
    pd.witnesses.push_back(std::move(w));
  }
  pd.detail = h.exact ? "constant Hessian, decided exactly" : "sampled over the bound box";
  out.push_back(std::move(pd));

  ConditionCheck bb;
  bb.name = "opt_out_residual_nonnegative";
  bb.status = ConditionStatus::kHolds;
  const ActionProfile& star = o.decomposition.u_star;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!o.opt_out[i]) {
      bb.status = ConditionStatus::kUnknown;
      continue;
    }
    const Expression rest = g.operator_cost() - g.cost(i);
    const Number at_star = evaluate(rest, star.values());
    const Number at_out = evaluate(rest, o.opt_out[i]->profile.values());
    const bool ok = at_least(at_star, at_out, tol);
    Witness w = make_witness("(J - C_i) at the optimum vs at the opt-out profile", at_star, ">=", at_out, ok);
    w.agent = i;
    w.profile = o.opt_out[i]->profile;
    bb.witnesses.push_back(std::move(w));
    if (!ok) bb.status = ConditionStatus::kFails;
  }
  out.push_back(std::move(bb));
  return out;
}

PropertyVerdict check_decoupled_impossibility(const Game& g) {
  PropertyVerdict v;
  v.name = "decoupled_impossibility";
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const VarId var : dependencies(g.cost(i))) {
      if (var.index != i) {
        v.holds = Holds::kNo;
        Witness w = make_witness("cost of agent depends on another action", Number(1), "=", Number(0), false);
        w.agent = i;
        w.other_agent = var.index;
        v.witnesses.push_back(std::move(w));
        v.detail = "agent costs are coupled";
        return v;
      }
    }
  }
  v.holds = Holds::kYes;
  v.detail =
      "every agent cost depends only on its own action: participation forces t_i <= C_i(opt-out) - C_i(realized) "
      "<= 0, so sum(t) <= 0 <= excess and weak budget balance cannot hold strictly";
  return v;
}

ConditionCheck check_alignment_sufficiency(const Game& g, const ActionProfile& u_star,
                                           std::span<const Expression> incentive, std::size_t random_samples,
                                           double tol) {
  ConditionCheck c;
  c.name = "incentive_alignment";
  c.status = ConditionStatus::kHoldsOnSamples;
  const auto star = u_star.doubles();
  std::vector<CompiledExpression> cost, t;
  std::vector<double> at_star;
  for (std::size_t i = 0; i < g.size(); ++i) {
    cost.emplace_back(g.cost(i));
    t.emplace_back(incentive[i]);
    at_star.push_back(cost[i](star));
  }
  for (const auto& p : sample_profiles(g.bounds(), random_samples)) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double lhs = cost[i](p) + t[i](p);
      if (lhs < at_star[i] - tol * std::max(1.0, std::fabs(at_star[i]))) {
        c.status = ConditionStatus::kFails;
        Witness w = make_witness("cost plus incentive vs cost at the optimum", Number::inexact(lhs), ">=",
                                 Number::inexact(at_star[i]), false);
        w.agent = i;
        w.profile = ActionProfile::from_doubles(p);
        c.witnesses.push_back(std::move(w));
        return c;
      }
    }
  }
  return c;
}

AuditReport full_audit(const AuditRequest& request, const SolverConfig& cfg) {
  cfg.validate();
  const Game& g = request.game;
  AuditReport r;
  r.agent_names = g.agent_names();
  r.scheme = request.scheme;
  r.participation = request.participation;
  r.optimum = minimize_operator(g, cfg);
  r.baseline = nash_equilibrium(g.costs(), g.bounds(), cfg);
  const bool anticipatory = request.scheme && request.scheme->mode == Anticipation::kAnticipatory;
  if (r.baseline.empty() && !anticipatory) throw NoEquilibriumError("no verified baseline equilibrium");
  for (const auto& eq : r.baseline) {
    r.baseline_operator_cost.push_back(evaluate(g.operator_cost(), eq.profile.values()));
  }

  bool exact_game = r.optimum.profile.is_exact();
  for (const auto& eq : r.baseline) exact_game = exact_game && eq.profile.is_exact();
  const double game_tol = exact_game ? kExactTolerance : kFloatingTolerance;

  r.game_conditions =
      check_excess_bound_sufficient_conditions(g, r.optimum.profile, r.baseline, request.declared_inner, game_tol);
  {
    ConditionCheck dsc;
    dsc.name = "agent_costs_diagonally_strictly_convex";
    const auto v = diagonal_strict_convexity_check(g.costs(), g.bounds(), cfg);
    switch (v.status) {
      case DefinitenessVerdict::Status::kHolds:
        dsc.status = ConditionStatus::kHolds;
        dsc.detail = "baseline equilibrium is unique";
        break;
      case DefinitenessVerdict::Status::kHoldsOnSamples:
        dsc.status = ConditionStatus::kHoldsOnSamples;
        break;
      case DefinitenessVerdict::Status::kFails:
        dsc.status = ConditionStatus::kFails;
        break;
      case DefinitenessVerdict::Status::kUnknown:
        dsc.status = ConditionStatus::kUnknown;
        break;
    }
    r.game_conditions.push_back(std::move(dsc));
  }
  r.decoupled = check_decoupled_impossibility(g);
  if (r.optimum.on_boundary) r.notes.push_back("the operator optimum lies on the bound box");
  r.notes.push_back(
      "with private cost functions no rule satisfies every property for all cost functions; the verdicts below "
      "are per instance");
  if (!request.scheme) return r;

  const IncentiveScheme& scheme = *request.scheme;
  const auto outcomes = realized_outcomes(g, scheme, request.participation, r.optimum, r.baseline, cfg);

  std::optional<ConditionCheck> alignment;
  if (scheme.kind == SchemeKind::kProportional && anticipatory) {
    alignment = check_alignment_sufficiency(g, r.optimum.profile, outcomes.front().incentive, 256, game_tol);
    r.game_conditions.push_back(*alignment);
  }

  for (const auto& o : outcomes) {
    EquilibriumAudit a;
    a.outcome = o;
    a.tolerance = tolerance_for(r.optimum, o);
    const double tol = a.tolerance;
    const Scenario s(g, o.incentive, o.participation, scheme.mode);
    for (std::size_t i = 0; i < g.size(); ++i) {
      a.agent_costs.push_back(evaluate(g.cost(i), o.realized.profile.values()));
      a.effective_costs.push_back(a.agent_costs.back() + (o.participation.participates(i) ? o.t[i] : Number(0)));
    }
    a.operator_net_cost = evaluate(g.operator_cost(), o.realized.profile.values()) - sum(o.t);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!o.opt_out[i]) {
        a.opt_out_operator_cost.emplace_back(std::nullopt);
        a.opt_out_agent_cost.emplace_back(std::nullopt);
        continue;
      }
      a.opt_out_agent_cost.emplace_back(evaluate(g.cost(i), o.opt_out[i]->profile.values()));
      ParticipationSet out = o.participation;
      out.opted_out.insert(i);
      a.opt_out_operator_cost.emplace_back(operator_net_cost(s.with_participation(out), o.opt_out[i]->profile));
    }

    a.properties.push_back(check_social_optimality(o, r.optimum.profile, tol));
    a.properties.push_back(check_budget_balance(o, tol));
    PropertyVerdict anticipatory_pc = check_participation_anticipatory(o, g, tol);
    PropertyVerdict weak_pc = check_participation_weak(o.decomposition, o.t, tol);
    if (!anticipatory) {
      anticipatory_pc = PropertyVerdict{};
      anticipatory_pc.name = "participation_anticipatory";
      anticipatory_pc.detail = "agents do not anticipate the incentive";
    } else {
      weak_pc.holds = Holds::kNotApplicable;
      weak_pc.detail = "agents anticipate the incentive";
    }
    a.properties.push_back(std::move(anticipatory_pc));
    a.properties.push_back(std::move(weak_pc));
    auto [equity, mono] = check_equity_monotonicity(o.decomposition, o.t, tol, tol);
    a.properties.push_back(std::move(equity));
    a.properties.push_back(std::move(mono));

    a.conditions.push_back(check_excess_bound(o.decomposition, tol));
    if (scheme.kind == SchemeKind::kVcg) {
      for (auto& c : check_vcg_conditions(g, o, cfg, tol)) a.conditions.push_back(std::move(c));
    }

    const auto* excess_bound = find_condition(a.conditions, "excess_within_marginal_sum");
    if (scheme.kind == SchemeKind::kVcg) {
      const auto* pd = find_condition(a.conditions, "operator_hessian_positive_definite");
      const auto* bb = find_condition(a.conditions, "opt_out_residual_nonnegative");
      bool equal_t = true;
      for (const auto& t : o.t) equal_t = equal_t && close(t, o.t.front(), tol);
      a.guarantees.push_back(guarantee("social_optimality", Holds::kYes, "operator_hessian_positive_definite",
                                       pd->satisfied(), "guaranteed when the operator Hessian is positive definite"));
      a.guarantees.push_back(guarantee("budget_balance", Holds::kConditional, "opt_out_residual_nonnegative",
                                       bb->satisfied(), "weak budget balance is guaranteed when the condition holds"));
      a.guarantees.push_back(guarantee("participation", Holds::kYes));
      a.guarantees.push_back(guarantee("equity_monotonicity", Holds::kConditional, "equal_incentives", equal_t,
                                       "marginal costs vanish at the optimum, so both need equal incentives"));
    } else if (scheme.kind == SchemeKind::kProportional) {
      if (anticipatory) {
        a.guarantees.push_back(guarantee("social_optimality", Holds::kConditional, "incentive_alignment",
                                         alignment->satisfied()));
      } else {
        bool aligned = true;
        for (std::size_t i = 0; i < g.size(); ++i) {
          aligned = aligned && close(o.realized.profile[i], r.optimum.profile[i], tol);
        }
        a.guarantees.push_back(guarantee("social_optimality", Holds::kConditional, "baseline_is_optimal", aligned,
                                         "agents that ignore the rule keep the baseline actions"));
      }
      a.guarantees.push_back(guarantee("budget_balance", Holds::kYes));
      a.guarantees.push_back(guarantee("participation", Holds::kConditional, "excess_within_marginal_sum",
                                       excess_bound->satisfied()));
      a.guarantees.push_back(guarantee("equity_monotonicity", Holds::kYes));
    }
    r.equilibria.push_back(std::move(a));
  }
  return r;
}

}  // namespace incentive
