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

#include "incentive/game.hpp"

#include <algorithm>
#include <cmath>

namespace incentive {
namespace {

void check_variables(const Expression& e, std::size_t n, const std::string& what) {
  if (variable_bound(e) > n) {
    throw GameError(what + " references a variable beyond u" + std::to_string(n));
  }
}

}  // namespace

Game::Game(std::vector<std::string> agent_names, std::vector<Expression> agent_costs,
           Expression operator_cost, Box bounds)
    : names_(std::move(agent_names)),
      costs_(std::move(agent_costs)),
      operator_cost_(std::move(operator_cost)),
      bounds_(std::move(bounds)) {
  const std::size_t n = costs_.size();
  if (n < 2) throw GameError("a game needs at least two agents");
  if (names_.size() != n) throw GameError("agent names and cost functions disagree in count");
  if (bounds_.size() != n) throw GameError("one bound interval is required per agent");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(bounds_[i].lo < bounds_[i].hi)) {
      throw GameError("empty bound interval for agent " + names_[i]);
    }
    check_variables(costs_[i], n, "cost of agent " + names_[i]);
  }
  check_variables(operator_cost_, n, "operator objective");
}

ActionProfile ActionProfile::from_doubles(std::span<const double> values) {
  std::vector<Number> v;
  v.reserve(values.size());
  for (double x : values) v.push_back(Number::inexact(x));
  return ActionProfile(std::move(v));
}

std::vector<double> ActionProfile::doubles() const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (const auto& v : values_) out.push_back(v.value());
  return out;
}

bool ActionProfile::is_exact() const {
  return std::all_of(values_.begin(), values_.end(), [](const Number& v) { return v.is_exact(); });
}

std::vector<std::size_t> ActionProfile::bound_violations(const Box& box) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values_.size() && i < box.size(); ++i) {
    const auto& v = values_[i];
    const bool inside = v.is_exact() ? (v.exact() >= box[i].lo && v.exact() <= box[i].hi)
                                     : box[i].contains(v.value());
    if (!inside) out.push_back(i);
  }
  return out;
}

double distance_inf(const ActionProfile& a, const ActionProfile& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    d = std::max(d, std::fabs(a[i].value() - b[i].value()));
  }
  return d;
}

Scenario::Scenario(Game game) : game_(std::move(game)) {}

Scenario::Scenario(Game game, std::vector<Expression> incentive, ParticipationSet participation,
                   Anticipation anticipation)
    : game_(std::move(game)),
      incentive_(std::move(incentive)),
      participation_(std::move(participation)),
      anticipation_(anticipation) {
  if (incentive_->size() != game_.size()) {
    throw GameError("one incentive function is required per agent");
  }
  for (std::size_t i = 0; i < incentive_->size(); ++i) {
    check_variables((*incentive_)[i], game_.size(), "incentive of agent " + game_.agent_names()[i]);
  }
  for (std::size_t i : participation_.opted_out) {
    if (i >= game_.size()) throw GameError("opt-out index out of range");
  }
}

Scenario Scenario::with_participation(ParticipationSet participation) const {
  if (!incentive_) return *this;
  return Scenario(game_, *incentive_, std::move(participation), anticipation_);
}

Expression effective_cost(const Scenario& s, std::size_t i) {
  const Expression& c = s.game().cost(i);
  if (!s.has_incentive() || !s.participation().participates(i) ||
      s.anticipation() == Anticipation::kNonAnticipatory) {
    return c;
  }
  return c + s.incentive()[i];
}

std::vector<Expression> effective_costs(const Scenario& s) {
  std::vector<Expression> out;
  for (std::size_t i = 0; i < s.game().size(); ++i) out.push_back(effective_cost(s, i));
  return out;
}

Number operator_net_cost(const Scenario& s, const ActionProfile& u) {
  Number net = evaluate(s.game().operator_cost(), u.values());
  if (!s.has_incentive()) return net;
  for (std::size_t i = 0; i < s.game().size(); ++i) {
    if (s.participation().participates(i)) net -= evaluate(s.incentive()[i], u.values());
  }
  return net;
}

}  // namespace incentive
