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

#ifndef INCENTIVE_SOLVE_HPP_
#define INCENTIVE_SOLVE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "incentive/expression.hpp"
#include "incentive/game.hpp"

namespace incentive {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  int grid_points_per_axis = 201;
  int br_max_iters = 500;
  double tol_fixed_point = 1e-9;
  double tol_stationarity = 1e-9;
  int multistart_count = 8;

  // Throws std::invalid_argument on a grid below 3 points or non-positive
  // tolerances/counts.
  void validate() const;
};

enum class SolveMethod { kBestResponse, kNewton, kGrid };
std::string_view to_string(SolveMethod m);

struct EquilibriumResult {
  ActionProfile profile;
  // Largest gain any single agent can obtain by deviating.
  double residual = 0.0;
  SolveMethod method = SolveMethod::kNewton;
  bool converged = false;
  bool on_boundary = false;
};

struct OperatorOptimum {
  ActionProfile profile;
  Number value;
  // The minimizer touches the box; the analysis assumes interior optima, so
  // this is reported rather than treated as an error.
  bool on_boundary = false;
};

// U* = argmin J over the bound box. Grid-seeded multistart Newton on the
// box-constrained stationarity system, exact rational refinement when the
// gradient is affine, ties broken toward the lexicographically smallest
// profile.
OperatorOptimum minimize_operator(const Game& g, const SolverConfig& cfg);
OperatorOptimum minimize_objective(const Expression& objective, const Box& box,
                                   const SolverConfig& cfg);

// argmin over u_i of costs[i] with the other coordinates of `profile` fixed.
// Coarse scan plus local refinement; ties go to the smallest u_i.
double best_response(std::span<const Expression> costs, std::size_t i,
                     std::span<const double> profile, const Box& box, const SolverConfig& cfg);

// All verified pure equilibria found by multistart stationarity Newton and
// best-response iteration (with a grid fallback when both fail), merged and
// sorted lexicographically. Empty when none verifies.
std::vector<EquilibriumResult> nash_equilibrium(std::span<const Expression> costs, const Box& box,
                                                const SolverConfig& cfg);

// max_i [C_i(U) - min_{u_i} C_i(u_i, u_{-i})], never negative.
double verify_nash(std::span<const Expression> costs, const ActionProfile& u, const Box& box,
                   const SolverConfig& cfg);

// Brute force reference: every grid profile at which no agent has a strictly
// improving unilateral grid deviation. Throws SolverError when the grid would
// exceed the enumeration budget.
std::vector<ActionProfile> grid_nash_oracle(std::span<const Expression> costs, const Box& box,
                                            const SolverConfig& cfg);
// Every grid profile attaining the grid minimum of `objective`.
std::vector<ActionProfile> grid_minimizers(const Expression& objective, const Box& box,
                                           const SolverConfig& cfg);
// Largest axis spacing of the grid.
double grid_step(const Box& box, int points_per_axis);

struct DefinitenessVerdict {
  enum class Status { kHolds, kHoldsOnSamples, kFails, kUnknown };
  Status status = Status::kUnknown;
  // The constant-matrix path decides exactly; otherwise the verdict only
  // covers the sampled profiles.
  bool exact = false;
  std::optional<ActionProfile> witness;
  double min_eigenvalue = 0.0;
  std::size_t samples = 0;
};
std::string_view to_string(DefinitenessVerdict::Status s);

// Positive definiteness of a symmetric matrix of expressions over the box.
DefinitenessVerdict positive_definite_check(const ExpressionMatrix& m, const Box& box,
                                            const SolverConfig& cfg);
DefinitenessVerdict hessian_pd_check(const Expression& e, const Box& box, const SolverConfig& cfg);
// Rosen's condition: with M_ij = d2 C_i / du_i du_j, M + M^T positive definite.
DefinitenessVerdict diagonal_strict_convexity_check(std::span<const Expression> costs,
                                                    const Box& box, const SolverConfig& cfg);

}  // namespace incentive

#endif  // INCENTIVE_SOLVE_HPP_
