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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "incentive/parser.hpp"
#include "incentive/solve.hpp"
#include "random_expr.hpp"

namespace incentive {
namespace {

const std::vector<std::string> kNames{"u1", "u2"};

Expression P(const std::string& text) { return parse_expression(text, kNames); }

Box box2(Rational lo, Rational hi) { return Box(2, Interval{lo, hi}); }

bool is_exactly(const ActionProfile& p, std::initializer_list<Rational> expected) {
  if (p.size() != expected.size() || !p.is_exact()) return false;
  std::size_t i = 0;
  for (const auto& r : expected) {
    if (p[i++].exact() != r) return false;
  }
  return true;
}

double distance_to(const ActionProfile& p, std::initializer_list<double> expected) {
  double d = 0.0;
  std::size_t i = 0;
  for (double x : expected) d = std::max(d, std::fabs(p[i++].value() - x));
  return d;
}

double min_distance(const std::vector<ActionProfile>& set, const ActionProfile& p) {
  double best = INFINITY;
  for (const auto& q : set) best = std::min(best, distance_inf(q, p));
  return best;
}

const std::vector<Expression> kFirstCosts{P("u1^2 - 2*u1*u2"), P("u1*u2 - u2")};

}  // namespace

TEST_SUITE("solve") {

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.grid_points_per_axis = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.tol_fixed_point = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.tol_stationarity = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("operator optimum of the worked examples is exact") {
  const SolverConfig cfg;
  const auto first = minimize_objective(P("(u1 - 3/4)^2 + (u2 - 2)^2"), Box(2), cfg);
  CHECK(is_exactly(first.profile, {Rational(3, 4), Rational(2)}));
  CHECK(first.value.is_exact());
  CHECK(first.value.exact() == 0);
  CHECK_FALSE(first.on_boundary);

  const auto second = minimize_objective(P("u1^2 + u2^2 + u1 + u2 - u1*u2"), Box(2), cfg);
  CHECK(is_exactly(second.profile, {Rational(-1), Rational(-1)}));

  const auto third = minimize_objective(P("u1^2/2 + u2^2 - u1 + u2 - u1*u2"), Box(2), cfg);
  CHECK(is_exactly(third.profile, {Rational(1), Rational(0)}));
  CHECK(third.value.exact() == Rational(-1, 2));
}

TEST_CASE("boundary minimizer is flagged") {
  const auto opt = minimize_objective(P("u1 + (u2 - 1)^2"), Box(2), SolverConfig{});
  CHECK(is_exactly(opt.profile, {Rational(-10), Rational(1)}));
  CHECK(opt.on_boundary);
}

TEST_CASE("non-differentiable objective falls back to coordinate descent") {
  const auto opt = minimize_objective(P("abs(u1 - 1) + abs(u2 + 2)"), Box(2), SolverConfig{});
  CHECK(distance_to(opt.profile, {1.0, -2.0}) <= 1e-6);
}

TEST_CASE("ties go to the lexicographically smallest minimizer") {
  const auto opt = minimize_objective(P("(u1^2 - 1)^2 + u2^2"), Box(2), SolverConfig{});
  CHECK(distance_to(opt.profile, {-1.0, 0.0}) <= 1e-6);
}

TEST_CASE("best responses") {
  const SolverConfig cfg;
  const std::vector<double> at_one{1.0, 1.0};
  CHECK(best_response(kFirstCosts, 0, at_one, Box(2), cfg) == doctest::Approx(1.0).epsilon(1e-12));
  // Agent 2 is indifferent when u1 = 1; the tie rule picks the lower bound.
  CHECK(best_response(kFirstCosts, 1, at_one, Box(2), cfg) == -10.0);
  const std::vector<Expression> quad{P("(u1 - 7/3)^2"), P("u2^2")};
  CHECK(best_response(quad, 0, std::vector<double>{0.0, 0.0}, Box(2), cfg) ==
        doctest::Approx(7.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("nash equilibrium of the first example") {
  const SolverConfig cfg;
  const auto baseline = nash_equilibrium(kFirstCosts, Box(2), cfg);
  REQUIRE(baseline.size() == 1);
  CHECK(is_exactly(baseline[0].profile, {Rational(1), Rational(1)}));
  CHECK(baseline[0].residual <= 1e-9);
  CHECK(baseline[0].converged);

  const std::vector<Expression> with_incentive{P("u1^2 - 2*u1*u2 + u1^2"), P("u1*u2 - u2 - 1/2")};
  const auto incentivized = nash_equilibrium(with_incentive, Box(2), cfg);
  REQUIRE(incentivized.size() == 1);
  CHECK(is_exactly(incentivized[0].profile, {Rational(1), Rational(2)}));
}

TEST_CASE("single agent equilibrium is its minimizer") {
  const std::vector<Expression> one{parse_expression("(u1 - 2)^2", std::vector<std::string>{"u1"})};
  const auto eq = nash_equilibrium(one, Box(1), SolverConfig{});
  REQUIRE(eq.size() == 1);
  CHECK(is_exactly(eq[0].profile, {Rational(2)}));
}

TEST_CASE("multiple equilibria are all returned in lexicographic order") {
  // Coordination: each agent wants to match the other, clipped to [-1, 1],
  // plus a double-well pull to +-1.
  const std::vector<Expression> costs{P("(u1^2 - 1)^2 - u1*u2"), P("(u2^2 - 1)^2 - u1*u2")};
  const auto eq = nash_equilibrium(costs, box2(-2, 2), SolverConfig{});
  REQUIRE(eq.size() >= 2);
  for (std::size_t k = 1; k < eq.size(); ++k) {
    CHECK(eq[k - 1].profile.doubles() < eq[k].profile.doubles());
  }
  for (const auto& e : eq) CHECK(verify_nash(costs, e.profile, box2(-2, 2), SolverConfig{}) <= 1e-9);
}

TEST_CASE("verify_nash residuals") {
  const SolverConfig cfg;
  const ActionProfile eq(std::vector<Number>{1, 1});
  CHECK(verify_nash(kFirstCosts, eq, Box(2), cfg) <= 1e-9);
  const ActionProfile origin(std::vector<Number>{0, 0});
  // Agent 2 gains 10 by moving to the upper bound.
  CHECK(verify_nash(kFirstCosts, origin, Box(2), cfg) == doctest::Approx(10.0));
  const std::vector<Expression> flat{P("3"), P("-1/2")};
  CHECK(verify_nash(flat, origin, Box(2), cfg) == 0.0);
}

TEST_CASE("grid oracle reference cases") {
  SolverConfig cfg;
  const Box small = box2(-2, 2);
  const auto first = grid_nash_oracle(kFirstCosts, small, cfg);
  const ActionProfile bar(std::vector<Number>{1, 1});
  CHECK(min_distance(first, bar) <= grid_step(small, cfg.grid_points_per_axis) + 1e-12);

  // Matching pennies on a grid that excludes zero.
  cfg.grid_points_per_axis = 4;
  const std::vector<Expression> pennies{P("u1*u2"), P("-u1*u2")};
  CHECK(grid_nash_oracle(pennies, box2(-1, 1), cfg).empty());

  cfg.grid_points_per_axis = 201;
  const std::vector<Expression> decoupled{P("(u1 - 0.33)^2"), P("(u2 + 1.27)^2")};
  const auto d = grid_nash_oracle(decoupled, Box(2), cfg);
  REQUIRE(d.size() == 1);
  CHECK(is_exactly(d[0], {Rational(3, 10), Rational(-13, 10)}));
}

TEST_CASE("grid oracle refuses oversized grids") {
  std::vector<std::string> names{"a", "b", "c", "d", "e"};
  std::vector<Expression> costs;
  for (const auto& n : names) costs.push_back(parse_expression(n + "^2", names));
  CHECK_THROWS_AS(grid_nash_oracle(costs, Box(5), SolverConfig{}), SolverError);
}

TEST_CASE("grid minimizers and step") {
  SolverConfig cfg;
  cfg.grid_points_per_axis = 5;
  CHECK(grid_step(Box(2), 5) == 5.0);
  const auto mins = grid_minimizers(P("(u1^2 - 25)^2 + u2^2"), Box(2), cfg);
  REQUIRE(mins.size() == 2);
  CHECK(is_exactly(mins[0], {Rational(-5), Rational(0)}));
  CHECK(is_exactly(mins[1], {Rational(5), Rational(0)}));
}

TEST_CASE("hessian definiteness") {
  const SolverConfig cfg;
  const auto third = hessian_pd_check(P("u1^2/2 + u2^2 - u1 + u2 - u1*u2"), Box(2), cfg);
  CHECK(third.status == DefinitenessVerdict::Status::kHolds);
  CHECK(third.exact);
  CHECK(third.min_eigenvalue > 0.0);

  const auto saddle = hessian_pd_check(P("u1*u2"), Box(2), cfg);
  CHECK(saddle.status == DefinitenessVerdict::Status::kFails);
  CHECK(saddle.witness.has_value());

  CHECK(hessian_pd_check(P("u1^2 + 3*u2^2"), Box(2), cfg).status == DefinitenessVerdict::Status::kHolds);
  CHECK(hessian_pd_check(P("u1^2"), Box(2), cfg).status == DefinitenessVerdict::Status::kFails);

  const auto quartic = hessian_pd_check(P("u1^4 + u2^2 + u1^2"), Box(2), cfg);
  CHECK(quartic.status == DefinitenessVerdict::Status::kHoldsOnSamples);
  CHECK_FALSE(quartic.exact);
  const auto bad_quartic = hessian_pd_check(P("u1^4 - 10*u1^2 + u2^2"), Box(2), cfg);
  CHECK(bad_quartic.status == DefinitenessVerdict::Status::kFails);
  REQUIRE(bad_quartic.witness.has_value());

  CHECK(hessian_pd_check(P("abs(u1) + u2^2"), Box(2), cfg).status == DefinitenessVerdict::Status::kUnknown);
}

TEST_CASE("diagonal strict convexity") {
  const SolverConfig cfg;
  const Expression j = P("u1^2/2 + u2^2 - u1 + u2 - u1*u2");
  CHECK(diagonal_strict_convexity_check(std::vector<Expression>{j, j}, Box(2), cfg).status ==
        DefinitenessVerdict::Status::kHolds);
  CHECK(diagonal_strict_convexity_check(std::vector<Expression>{P("-u1^2"), P("u2^2")}, Box(2), cfg).status ==
        DefinitenessVerdict::Status::kFails);
  CHECK(diagonal_strict_convexity_check(std::vector<Expression>{P("(u1 - 1)^2"), P("(u2 + 1)^2")}, Box(2), cfg)
            .status == DefinitenessVerdict::Status::kHolds);
}

TEST_CASE("property: diagonally strictly convex quadratic games have one equilibrium matching the oracle") {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> curvature(1, 8);
  std::uniform_int_distribution<int> target(-12, 12);
  SolverConfig cfg;
  const Box box = Box(2);
  const double step = grid_step(box, cfg.grid_points_per_axis);
  for (int trial = 0; trial < 25; ++trial) {
    // C_i = a_i (u_i - m_i)^2 + b_i u_i u_j + d_i u_j^2 with |b_i| <= a_i so
    // each best response has slope at most 1/2.
    std::vector<Expression> costs;
    for (std::size_t i = 0; i < 2; ++i) {
      const int a = curvature(rng);
      std::uniform_int_distribution<int> cross(-a, a);
      const std::string own = kNames[i], other = kNames[1 - i];
      const std::string text = std::to_string(a) + "*(" + own + " - " + std::to_string(target(rng)) + "/2)^2 + " +
                               std::to_string(cross(rng)) + "*" + own + "*" + other + " + " +
                               std::to_string(target(rng)) + "*" + other + "^2";
      costs.push_back(P(text));
    }
    const auto rosen = diagonal_strict_convexity_check(costs, box, cfg);
    if (rosen.status != DefinitenessVerdict::Status::kHolds) continue;
    const auto eq = nash_equilibrium(costs, box, cfg);
    REQUIRE(eq.size() == 1);
    const auto oracle = grid_nash_oracle(costs, box, cfg);
    REQUIRE_FALSE(oracle.empty());
    CHECK(min_distance(oracle, eq[0].profile) <= step + 1e-9);
    for (const auto& g : oracle) CHECK(distance_inf(g, eq[0].profile) <= step + 1e-9);
  }
}

TEST_CASE("property: operator optimum never loses to the grid") {
  std::mt19937_64 rng(99);
  SolverConfig cfg;
  SolverConfig coarse;
  coarse.grid_points_per_axis = 101;
  const Box box = box2(-2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const Expression j = testing::random_polynomial(rng, 2, 4);
    const auto opt = minimize_objective(j, box, cfg);
    const auto grid = grid_minimizers(j, box, coarse);
    REQUIRE_FALSE(grid.empty());
    const double grid_min = evaluate(j, grid.front().doubles());
    CHECK(opt.value.value() <= grid_min + 1e-9 * std::max(1.0, std::fabs(grid_min)));
  }
}

TEST_CASE("property: interior optimum of a strictly convex quadratic is stationary") {
  std::mt19937_64 rng(5);
  const SolverConfig cfg;
  for (int trial = 0; trial < 30; ++trial) {
    const Number a = testing::random_rational(rng, 3);
    const Number b = testing::random_rational(rng, 3);
    const Number c = testing::random_rational(rng, 1);
    const Expression u1 = Expression::variable({0}), u2 = Expression::variable({1});
    const Expression j = Expression(2) * u1 * u1 + Expression(3) * u2 * u2 + Expression(c) * u1 * u2 +
                         Expression(a) * u1 + Expression(b) * u2;
    const auto opt = minimize_objective(j, Box(2), cfg);
    REQUIRE_FALSE(opt.on_boundary);
    CHECK(opt.profile.is_exact());
    const auto point = opt.profile.doubles();
    CHECK(std::fabs(evaluate(partial(j, VarId{0}), point)) <= cfg.tol_stationarity);
    CHECK(std::fabs(evaluate(partial(j, VarId{1}), point)) <= cfg.tol_stationarity);
  }
}

}  // TEST_SUITE

}  // namespace incentive
