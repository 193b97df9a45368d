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

#ifndef INCENTIVE_GAME_HPP_
#define INCENTIVE_GAME_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "incentive/expression.hpp"
#include "incentive/number.hpp"

namespace incentive {

class GameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Closed action interval [lo, hi] with lo < hi.
struct Interval {
  Rational lo{-10};
  Rational hi{10};

  double lower() const { return lo.convert_to<double>(); }
  double upper() const { return hi.convert_to<double>(); }
  bool contains(double x, double slack = 0.0) const {
    return x >= lower() - slack && x <= upper() + slack;
  }
};

using Box = std::vector<Interval>;

// Agents, their cost functions C_i, the operator objective J and the action
// bounds. Immutable once constructed.
class Game {
 public:
  // Throws GameError when n < 2, sizes disagree, a bound is empty, or an
  // expression references a variable beyond u_n.
  Game(std::vector<std::string> agent_names, std::vector<Expression> agent_costs,
       Expression operator_cost, Box bounds);

  std::size_t size() const { return costs_.size(); }
  const std::vector<std::string>& agent_names() const { return names_; }
  const std::vector<Expression>& costs() const { return costs_; }
  const Expression& cost(std::size_t i) const { return costs_.at(i); }
  const Expression& operator_cost() const { return operator_cost_; }
  const Box& bounds() const { return bounds_; }

 private:
  std::vector<std::string> names_;
  std::vector<Expression> costs_;
  Expression operator_cost_;
  Box bounds_;
};

// One action per agent. Entries stay exact rationals when they were computed
// exactly.
class ActionProfile {
 public:
  ActionProfile() = default;
  explicit ActionProfile(std::vector<Number> values) : values_(std::move(values)) {}
  static ActionProfile from_doubles(std::span<const double> values);

  std::size_t size() const { return values_.size(); }
  const Number& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Number>& values() const { return values_; }
  std::vector<double> doubles() const;
  bool is_exact() const;

  // Indices whose value lies outside the box. Out-of-bound values are
  // reported, never clamped.
  std::vector<std::size_t> bound_violations(const Box& box) const;

  // max_i |a_i - b_i| in floating point.
  friend double distance_inf(const ActionProfile& a, const ActionProfile& b);

 private:
  std::vector<Number> values_;
};

struct ParticipationSet {
  std::set<std::size_t> opted_out;
  bool participates(std::size_t i) const { return opted_out.count(i) == 0; }
};

enum class Anticipation { kAnticipatory, kNonAnticipatory };

// A game, optionally with materialized incentive functions
// t_i(U), the set of agents who opted out, and whether participants
// anticipate the incentive.
class Scenario {
 public:
  explicit Scenario(Game game);
  // `incentive` holds one t_i per agent. Throws GameError on size mismatch or
  // out-of-range opt-out indices.
  Scenario(Game game, std::vector<Expression> incentive, ParticipationSet participation,
           Anticipation anticipation);

  const Game& game() const { return game_; }
  bool has_incentive() const { return incentive_.has_value(); }
  // Precondition: has_incentive().
  const std::vector<Expression>& incentive() const { return *incentive_; }
  const ParticipationSet& participation() const { return participation_; }
  Anticipation anticipation() const { return anticipation_; }

  Scenario with_participation(ParticipationSet participation) const;

 private:
  Game game_;
  std::optional<std::vector<Expression>> incentive_;
  ParticipationSet participation_;
  Anticipation anticipation_ = Anticipation::kNonAnticipatory;
};

// C_i for opted-out agents, without an incentive, or when agents are
// non-anticipatory; C_i + t_i otherwise.
Expression effective_cost(const Scenario& s, std::size_t i);
std::vector<Expression> effective_costs(const Scenario& s);

// J(U) minus the incentives paid to participating agents.
Number operator_net_cost(const Scenario& s, const ActionProfile& u);

}  // namespace incentive

#endif  // INCENTIVE_GAME_HPP_
