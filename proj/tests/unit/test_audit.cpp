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

#include <random>
#include <string>
#include <vector>

#include "incentive/audit.hpp"
#include "incentive/parser.hpp"

namespace incentive {
namespace {

const std::vector<std::string> kNames{"u1", "u2"};

Expression P(const std::string& text) { return parse_expression(text, kNames); }

ActionProfile Q(std::initializer_list<Rational> values) {
  std::vector<Number> v;
  for (const auto& r : values) v.emplace_back(r);
  return ActionProfile(std::move(v));
}

Game game(const std::string& c1, const std::string& c2, const std::string& j) {
  return Game(kNames, {P(c1), P(c2)}, P(j), Box(2));
}

Game first_example() { return game("u1^2 - 2*u1*u2", "u1*u2 - u2", "(u1 - 3/4)^2 + (u2 - 2)^2"); }
const IncentiveScheme kFirstScheme{SchemeKind::kCustom, Anticipation::kAnticipatory, {P("u1^2"), P("-1/2")}};

Game third_example(const std::string& c1) {
  return game(c1, "u2^2/2 + u1*u2 - u2", "u1^2/2 + u2^2 - u1 + u2 - u1*u2");
}
const IncentiveScheme kVcg{SchemeKind::kVcg, Anticipation::kAnticipatory, {}};

const PropertyVerdict& property(const EquilibriumAudit& a, const std::string& name) {
  for (const auto& p : a.properties) {
    if (p.name == name) return p;
  }
  FAIL("missing property " << name);
  return a.properties.front();
}

const PropertyVerdict& guarantee(const EquilibriumAudit& a, const std::string& name) {
  for (const auto& p : a.guarantees) {
    if (p.name == name) return p;
  }
  FAIL("missing guarantee " << name);
  return a.guarantees.front();
}

const ConditionCheck& condition(const std::vector<ConditionCheck>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  FAIL("missing condition " << name);
  return checks.front();
}

std::string small_rational(std::mt19937_64& rng, int range) {
  std::uniform_int_distribution<int> num(-range * 4, range * 4);
  return "(" + std::to_string(num(rng)) + "/4)";
}

AuditReport audit(const Game& g, std::optional<IncentiveScheme> scheme,
                  std::optional<Expression> declared = std::nullopt) {
  return full_audit(AuditRequest{g, std::move(scheme), {}, std::move(declared)}, SolverConfig{});
}

IncentiveOutcome outcome_with(const CostDecomposition& d, std::vector<Number> t) {
  IncentiveOutcome o;
  o.decomposition = d;
  o.t = std::move(t);
  o.realized.profile = d.u_realized;
  return o;
}

}  // namespace

TEST_SUITE("audit") {

TEST_CASE("first example audit") {
  const auto r = audit(first_example(), kFirstScheme);
  REQUIRE(r.equilibria.size() == 1);
  const auto& a = r.equilibria[0];
  CHECK(a.tolerance == kExactTolerance);

  const auto& so = property(a, "social_optimality");
  CHECK(so.holds == Holds::kNo);
  REQUIRE(so.witnesses.size() == 1);
  CHECK(so.witnesses[0].agent == 0u);
  CHECK((so.witnesses[0].lhs - so.witnesses[0].rhs).exact() == Rational(1, 4));

  const auto& bb = property(a, "budget_balance");
  CHECK(bb.holds == Holds::kYes);
  CHECK(bb.level == "weak");
  CHECK(bb.strict == true);
  CHECK(bb.witnesses[0].lhs.exact() == Rational(1, 2));
  CHECK(bb.witnesses[0].rhs.exact() == Rational(1, 16));

  const auto& pc = property(a, "participation_anticipatory");
  CHECK(pc.holds == Holds::kYes);
  REQUIRE(pc.witnesses.size() == 2);
  CHECK(pc.witnesses[0].lhs.exact() == -1);
  CHECK(pc.witnesses[0].rhs.exact() == -2);
  CHECK(pc.witnesses[1].lhs.exact() == 0);
  CHECK(pc.witnesses[1].rhs.exact() == Rational(-1, 2));

  CHECK(property(a, "monotonicity").holds == Holds::kYes);
  CHECK(property(a, "participation_weak").holds == Holds::kNotApplicable);
  CHECK(a.operator_net_cost.exact() == Rational(1, 16) - Rational(1, 2));
  CHECK(a.agent_costs[0].exact() == -3);
  CHECK(a.agent_costs[1].exact() == 0);
  REQUIRE(r.baseline_operator_cost.size() == 1);
  CHECK(r.baseline_operator_cost[0].exact() == Rational(17, 16));
  // Custom rules carry no guarantee pattern.
  CHECK(a.guarantees.empty());
}

TEST_CASE("third example, first case: VCG rule is optimal and balanced") {
  const auto r = audit(third_example("u1^2/2 - u1"), kVcg);
  REQUIRE(r.equilibria.size() == 1);
  const auto& a = r.equilibria[0];
  CHECK(property(a, "social_optimality").holds == Holds::kYes);
  CHECK(property(a, "budget_balance").level == "exact");
  const auto& eq6 = condition(a.conditions, "opt_out_residual_nonnegative");
  CHECK(eq6.status == ConditionStatus::kHolds);
  for (const auto& w : eq6.witnesses) {
    // Each opt-out profile coincides with U* = (1, 0).
    CHECK(w.lhs.exact() == w.rhs.exact());
  }
}

TEST_CASE("third example, second case: budget balance and equity fail") {
  const auto r = audit(third_example("u1^2/2 + u1"), kVcg);
  REQUIRE(r.equilibria.size() == 1);
  const auto& a = r.equilibria[0];
  CHECK(property(a, "social_optimality").holds == Holds::kYes);
  CHECK(property(a, "participation_anticipatory").holds == Holds::kYes);
  CHECK(property(a, "budget_balance").holds == Holds::kNo);
  CHECK(property(a, "budget_balance").witnesses[0].lhs.exact() == -3);
  const auto& equity = property(a, "equity");
  CHECK(equity.holds == Holds::kNo);
  REQUIRE_FALSE(equity.witnesses.empty());
  CHECK(equity.witnesses[0].lhs.exact() == -3);
  CHECK(equity.witnesses[0].rhs.exact() == 0);

  const auto& eq6 = condition(a.conditions, "opt_out_residual_nonnegative");
  CHECK(eq6.status == ConditionStatus::kFails);
  CHECK(eq6.witnesses[0].lhs.exact() == -2);
  CHECK(eq6.witnesses[0].rhs.exact() == 1);
  CHECK_FALSE(eq6.witnesses[0].satisfied);
  CHECK(condition(a.conditions, "operator_hessian_positive_definite").status == ConditionStatus::kHolds);
}

TEST_CASE("guarantee patterns of the built-in rules") {
  const auto vcg = audit(third_example("u1^2/2 + u1"), kVcg);
  const auto& v = vcg.equilibria[0];
  CHECK(guarantee(v, "social_optimality").holds == Holds::kYes);
  CHECK(guarantee(v, "budget_balance").holds == Holds::kConditional);
  CHECK(guarantee(v, "budget_balance").condition == std::string("opt_out_residual_nonnegative"));
  CHECK(guarantee(v, "budget_balance").condition_holds == false);
  CHECK(guarantee(v, "participation").holds == Holds::kYes);
  CHECK(guarantee(v, "equity_monotonicity").holds == Holds::kConditional);
  CHECK(guarantee(v, "equity_monotonicity").condition_holds == false);

  const IncentiveScheme prop{SchemeKind::kProportional, Anticipation::kNonAnticipatory, {}};
  const auto pr = audit(first_example(), prop);
  const auto& p = pr.equilibria[0];
  CHECK(guarantee(p, "social_optimality").holds == Holds::kConditional);
  CHECK(guarantee(p, "social_optimality").condition_holds == false);
  CHECK(guarantee(p, "budget_balance").holds == Holds::kYes);
  CHECK(guarantee(p, "participation").holds == Holds::kConditional);
  CHECK(guarantee(p, "participation").condition == std::string("excess_within_marginal_sum"));
  CHECK(guarantee(p, "participation").condition_holds == true);
  CHECK(guarantee(p, "equity_monotonicity").holds == Holds::kYes);
  CHECK(property(p, "budget_balance").level == "exact");
  CHECK(property(p, "participation_weak").holds == Holds::kYes);
  CHECK(property(p, "participation_anticipatory").holds == Holds::kNotApplicable);
}

TEST_CASE("an audit without incentive only fills the baseline") {
  const auto r = audit(first_example(), std::nullopt);
  CHECK(r.equilibria.empty());
  REQUIRE(r.baseline.size() == 1);
  CHECK(r.baseline_operator_cost[0].exact() == Rational(17, 16));
  CHECK(condition(r.game_conditions, "separable_operator_cost").status == ConditionStatus::kHolds);
}

TEST_CASE("social optimality with aligned objectives") {
  const std::string j = "(u1 - 1)^2 + (u2 + 1)^2 + u1*u2";
  const IncentiveScheme zero{SchemeKind::kCustom, Anticipation::kAnticipatory, {P("0"), P("0")}};
  const auto r = audit(game(j, j, j), zero);
  CHECK(property(r.equilibria[0], "social_optimality").holds == Holds::kYes);
}

TEST_CASE("weak participation") {
  const Game g = game("u1^2", "u2^2", "u1^2 + 2*u2^2");
  const auto d = decompose(g, Q({0, 0}), Q({1, 1}));
  CHECK(check_participation_weak(d, proportional_allocation(d), kExactTolerance).holds == Holds::kYes);
  const std::vector<Number> over{d.theta[0] + Number(1), d.theta[1]};
  const auto v = check_participation_weak(d, over, kExactTolerance);
  CHECK(v.holds == Holds::kNo);
  CHECK_FALSE(v.witnesses[0].satisfied);
}

TEST_CASE("equity and monotonicity") {
  CostDecomposition d;
  d.theta = {Number(1), Number(1), Number(3)};
  auto [eq, mono] = check_equity_monotonicity(d, std::vector<Number>{2, 2, 5}, 1e-9, 1e-9);
  CHECK(eq.holds == Holds::kYes);
  CHECK(mono.holds == Holds::kYes);
  auto [eq2, mono2] = check_equity_monotonicity(d, std::vector<Number>{2, 1, 5}, 1e-9, 1e-9);
  CHECK(eq2.holds == Holds::kNo);
  CHECK(mono2.holds == Holds::kNo);
  auto [eq3, mono3] = check_equity_monotonicity(d, std::vector<Number>{2, 2, 0}, 1e-9, 1e-9);
  CHECK(eq3.holds == Holds::kYes);
  CHECK(mono3.holds == Holds::kNo);
  d.theta = {Number(4)};
  auto [eq4, mono4] = check_equity_monotonicity(d, std::vector<Number>{-7}, 1e-9, 1e-9);
  CHECK(eq4.holds == Holds::kYes);
  CHECK(mono4.holds == Holds::kYes);
}

TEST_CASE("property: common scaling of marginal costs keeps equity and monotonicity verdicts") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> small(0, 3), scale(1, 9);
  for (int trial = 0; trial < 200; ++trial) {
    CostDecomposition d, scaled;
    std::vector<Number> t;
    const int c = scale(rng);
    for (int i = 0; i < 3; ++i) {
      const int th = small(rng);
      d.theta.emplace_back(th);
      scaled.theta.emplace_back(th * c);
      t.emplace_back(small(rng));
    }
    const auto [e1, m1] = check_equity_monotonicity(d, t, 1e-9, 1e-9);
    const auto [e2, m2] = check_equity_monotonicity(scaled, t, 1e-9, 1e-9);
    CHECK(e1.holds == e2.holds);
    CHECK(m1.holds == m2.holds);
  }
}

TEST_CASE("excess bound on the second example") {
  const Game g = game("u1^2", "u2^2", "u1^2 + u2^2 + u1 + u2 - u1*u2");
  const ActionProfile star = Q({-1, -1});
  CHECK(check_excess_bound(decompose(g, star, Q({0, 0})), kExactTolerance).status == ConditionStatus::kHolds);
  CHECK(check_excess_bound(decompose(g, star, Q({-2, -2})), kExactTolerance).status == ConditionStatus::kHolds);
  const auto fails = check_excess_bound(decompose(g, star, Q({-2, 0})), kExactTolerance);
  CHECK(fails.status == ConditionStatus::kFails);
  CHECK((fails.witnesses[0].rhs - fails.witnesses[0].lhs).exact() == -1);

  const Game separable = game("u1^2", "u2^2", "u1^2 + 3*u2^2 - u2");
  const auto d = decompose(separable, Q({0, Rational(1, 6)}), Q({2, -1}));
  const auto c = check_excess_bound(d, kExactTolerance);
  CHECK(c.status == ConditionStatus::kHolds);
  CHECK(c.witnesses[0].lhs == c.witnesses[0].rhs);
}

TEST_CASE("sufficient conditions for the excess bound") {
  const SolverConfig cfg;
  const Game first = first_example();
  const auto base = nash_equilibrium(first.costs(), first.bounds(), cfg);
  const auto c1 = check_excess_bound_sufficient_conditions(first, Q({Rational(3, 4), 2}), base, std::nullopt,
                                                           kExactTolerance);
  CHECK(condition(c1, "separable_operator_cost").status == ConditionStatus::kHolds);
  CHECK(condition(c1, "declared_absolute_form").status == ConditionStatus::kNotApplicable);

  const Game second = game("(u1 - u2/2)^2", "(u2 - u1/2)^2", "u1^2 + u2^2 + u1 + u2 - u1*u2");
  const auto base2 = nash_equilibrium(second.costs(), second.bounds(), cfg);
  const auto c2 = check_excess_bound_sufficient_conditions(second, Q({-1, -1}), base2, std::nullopt, kExactTolerance);
  CHECK(condition(c2, "separable_operator_cost").status == ConditionStatus::kFails);
  const auto& third = condition(c2, "marginal_profiles_dominate_baseline");
  // Baseline (0, 0): J(0, -1) = 0 and J(-1, 0) = 0 against J(0, 0) = 0.
  CHECK(third.status == ConditionStatus::kHolds);
  CHECK(third.witnesses.size() == 2);

  const Game absolute = game("u1^2", "u2^2", "abs(u1 + u2 - 2)");
  const auto c3 = check_excess_bound_sufficient_conditions(absolute, Q({1, 1}), {}, P("u1 + u2"), kExactTolerance);
  CHECK(condition(c3, "declared_absolute_form").status == ConditionStatus::kHoldsOnSamples);
  const auto c4 = check_excess_bound_sufficient_conditions(absolute, Q({1, 1}), {}, P("u1 + 2*u2"), kExactTolerance);
  CHECK(condition(c4, "declared_absolute_form").status == ConditionStatus::kFails);
  const auto c5 = check_excess_bound_sufficient_conditions(absolute, Q({1, 1}), {}, P("u1*u2"), kExactTolerance);
  CHECK(condition(c5, "declared_absolute_form").status == ConditionStatus::kFails);
}

TEST_CASE("VCG conditions flag a degenerate operator Hessian") {
  const Game g = game("u1^2", "u2^2 + u1*u2", "u1^2");
  const auto o = vcg_incentive(g, SolverConfig{});
  const auto c = check_vcg_conditions(g, o, SolverConfig{}, kExactTolerance);
  CHECK(condition(c, "operator_hessian_positive_definite").status == ConditionStatus::kFails);
}

TEST_CASE("decoupled impossibility flag") {
  CHECK(check_decoupled_impossibility(game("(u1 - 1)^2", "(u2 + 1)^2", "u1^2 + u2^2")).holds == Holds::kYes);
  const auto coupled = check_decoupled_impossibility(first_example());
  CHECK(coupled.holds == Holds::kNo);
  REQUIRE_FALSE(coupled.witnesses.empty());
  const std::vector<std::string> three{"a", "b", "c"};
  const Game g3(three,
                {parse_expression("a^2", three), parse_expression("b^2", three), parse_expression("c^2 + a*c", three)},
                parse_expression("a + b + c", three), Box(3));
  CHECK(check_decoupled_impossibility(g3).holds == Holds::kNo);
}

TEST_CASE("alignment sufficiency") {
  const SolverConfig cfg;
  const std::string j = "(u1 - 1)^2 + 2*(u2 + 1)^2";
  const Game aligned = game(j, j, j);
  const ActionProfile star = Q({1, -1});
  std::vector<Expression> t{proportional_as_expression(aligned, star, 0), proportional_as_expression(aligned, star, 1)};
  CHECK(check_alignment_sufficiency(aligned, star, t, 64, kExactTolerance).status ==
        ConditionStatus::kHoldsOnSamples);

  const Game first = first_example();
  const ActionProfile first_star = Q({Rational(3, 4), 2});
  std::vector<Expression> tf{proportional_as_expression(first, first_star, 0),
                             proportional_as_expression(first, first_star, 1)};
  const auto fails = check_alignment_sufficiency(first, first_star, tf, 64, kExactTolerance);
  CHECK(fails.status == ConditionStatus::kFails);
  REQUIRE(fails.witnesses.size() == 1);
  CHECK(fails.witnesses[0].profile.has_value());

  // At U* every incentive vanishes and both sides agree.
  CHECK(evaluate(tf[0], first_star.values()).exact() == 0);
}

TEST_CASE("budget balance levels") {
  CostDecomposition d;
  d.excess = Number(Rational(1, 16));
  d.u_realized = Q({0, 0});
  CHECK(check_budget_balance(outcome_with(d, {Number(Rational(1, 32)), Number(Rational(1, 32))}), 1e-9).level ==
        "exact");
  const auto weak = check_budget_balance(outcome_with(d, {Number(1), Number(0)}), 1e-9);
  CHECK(weak.level == "weak");
  CHECK(weak.strict == true);
  const auto none = check_budget_balance(outcome_with(d, {Number(0), Number(0)}), 1e-9);
  CHECK(none.holds == Holds::kNo);
  CHECK_FALSE(none.witnesses.empty());
}

TEST_CASE("property: audits are deterministic") {
  const auto a = audit(third_example("u1^2/2 + u1"), kVcg);
  const auto b = audit(third_example("u1^2/2 + u1"), kVcg);
  REQUIRE(a.equilibria.size() == b.equilibria.size());
  for (std::size_t k = 0; k < a.equilibria.size(); ++k) {
    const auto& x = a.equilibria[k];
    const auto& y = b.equilibria[k];
    REQUIRE(x.properties.size() == y.properties.size());
    for (std::size_t p = 0; p < x.properties.size(); ++p) {
      CHECK(x.properties[p].holds == y.properties[p].holds);
      CHECK(x.properties[p].witnesses.size() == y.properties[p].witnesses.size());
    }
    CHECK(x.outcome.realized.profile.values() == y.outcome.realized.profile.values());
  }
}

TEST_CASE("property: proportional rule on separable strictly convex operators") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> pos(1, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::string j = std::to_string(pos(rng)) + "*(u1 - " + small_rational(rng, 3) +
                          ")^2 + " + std::to_string(pos(rng)) + "*(u2 - " +
                          small_rational(rng, 3) + ")^2";
    const std::string c1 = std::to_string(pos(rng)) + "*u1^2 + " + small_rational(rng, 2) +
                           "*u1*u2 + " + small_rational(rng, 3) + "*u1";
    const std::string c2 = std::to_string(pos(rng)) + "*u2^2 + " + small_rational(rng, 2) +
                           "*u1*u2 + " + small_rational(rng, 3) + "*u2";
    const IncentiveScheme prop{SchemeKind::kProportional, Anticipation::kNonAnticipatory, {}};
    const auto r = audit(game(c1, c2, j), prop);
    for (const auto& a : r.equilibria) {
      CHECK(property(a, "budget_balance").level == "exact");
      CHECK(property(a, "equity").holds == Holds::kYes);
      CHECK(property(a, "monotonicity").holds == Holds::kYes);
      CHECK(property(a, "participation_weak").holds == Holds::kYes);
    }
  }
}

}  // TEST_SUITE

}  // namespace incentive
