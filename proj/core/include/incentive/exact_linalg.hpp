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

#ifndef INCENTIVE_EXACT_LINALG_HPP_
#define INCENTIVE_EXACT_LINALG_HPP_

#include <optional>
#include <vector>

#include "incentive/number.hpp"

namespace incentive {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Solves a x = b exactly. nullopt when a is singular.
std::optional<std::vector<Rational>> solve_exact(RationalMatrix a, std::vector<Rational> b);

// Symmetric positive definiteness by exact symmetric elimination: the matrix
// is PD iff every pivot is positive (equivalently, every leading principal
// minor is). Returns the pivots computed before the first non-positive one.
struct PivotTest {
  bool positive_definite = false;
  std::vector<Rational> pivots;
};
PivotTest exact_positive_definite(RationalMatrix a);

}  // namespace incentive

#endif  // INCENTIVE_EXACT_LINALG_HPP_
