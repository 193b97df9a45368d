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

#include "incentive/solve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "incentive/exact_linalg.hpp"
#include "incentive/polynomial.hpp"

namespace incentive {
namespace {

constexpr double kMergeDistance = 1e-6;
constexpr double kTieRelative = 1e-12;
constexpr double kGridImproveRelative = 1e-10;
constexpr double kGridBudget = 5e7;
constexpr double kSeedGridBudget = 2e5;
constexpr int kNewtonMaxIters = 100;
constexpr int kMaxRefinedMinima = 8;

double scale_of(double v) { return std::max(1.0, std::fabs(v)); }

std::vector<double> lower_bounds(const Box& box) {
  std::vector<double> out;
  for (const auto& iv : box) out.push_back(iv.lower());
  return out;
}

std::vector<double> upper_bounds(const Box& box) {
  std::vector<double> out;
  for (const auto& iv : box) out.push_back(iv.upper());
  return out;
}

bool touches_bound(const std::vector<double>& u, const Box& box) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double lo = box[i].lower(), hi = box[i].upper();
    if (std::fabs(u[i] - lo) <= 1e-9 * scale_of(lo) || std::fabs(u[i] - hi) <= 1e-9 * scale_of(hi)) {
      return true;
    }
  }
  return false;
}

bool lexicographically_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double radical_inverse(std::size_t k, unsigned base) {
  double f = 1.0, r = 0.0;
  while (k > 0) {
    f /= base;
    r += f * static_cast<double>(k % base);
    k /= base;
  }
  return r;
}

constexpr std::array<unsigned, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

// Center of the box followed by Halton points.
std::vector<std::vector<double>> seed_points(const Box& box, int count) {
  std::vector<std::vector<double>> seeds;
  const std::size_t n = box.size();
  for (int k = 0; k < count; ++k) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double frac = k == 0 ? 0.5 : radical_inverse(static_cast<std::size_t>(k), kPrimes[i % kPrimes.size()]);
      p[i] = box[i].lower() + frac * (box[i].upper() - box[i].lower());
    }
    seeds.push_back(std::move(p));
  }
  return seeds;
}

Rational grid_value(const Interval& iv, int m, int k) {
  return iv.lo + (iv.hi - iv.lo) * Rational(k, m - 1);
}

std::vector<std::vector<Rational>> grid_axes(const Box& box, int m) {
  std::vector<std::vector<Rational>> axes;
  for (const auto& iv : box) {
    std::vector<Rational> axis;
    for (int k = 0; k < m; ++k) axis.push_back(grid_value(iv, m, k));
    axes.push_back(std::move(axis));
  }
  return axes;
}

double grid_size(std::size_t n, int m) { return std::pow(static_cast<double>(m), static_cast<double>(n)); }

// ---------------------------------------------------------------------------
// One-dimensional minimization.

struct LineMin {
  double x;
  double f;
};

bool better(const LineMin& a, const LineMin& b) {
  const double tol = kTieRelative * std::max(scale_of(a.f), scale_of(b.f));
  if (a.f < b.f - tol) return true;
  if (b.f < a.f - tol) return false;
  return a.x < b.x;
}

double bisect_derivative(const std::function<double(double)>& df, double a, double b) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (df(mid) > 0.0) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return 0.5 * (a + b);
}

double golden_section(const std::function<double(double)>& f, double a, double b) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

// Global minimizer of f on [lo, hi]: scan, then refine every promising local
// minimum of the scan. Derivative sign bisection when df is given and
// brackets a root, golden section otherwise.
LineMin line_minimize(const std::function<double(double)>& f, const std::function<double(double)>* df,
                      double lo, double hi, int points) {
  std::vector<double> xs(points), fs(points);
  for (int k = 0; k < points; ++k) {
    xs[k] = k == points - 1 ? hi : lo + (hi - lo) * k / (points - 1);
    fs[k] = f(xs[k]);
  }
  std::vector<int> minima;
  for (int k = 0; k < points; ++k) {
    const bool left = k == 0 || fs[k] <= fs[k - 1];
    const bool right = k == points - 1 || fs[k] <= fs[k + 1];
    if (left && right) minima.push_back(k);
  }
  std::stable_sort(minima.begin(), minima.end(), [&](int a, int b) { return fs[a] < fs[b]; });
  if (minima.size() > static_cast<std::size_t>(kMaxRefinedMinima)) minima.resize(kMaxRefinedMinima);

  LineMin best{xs[minima.front()], fs[minima.front()]};
  for (int k : minima) {
    LineMin local{xs[k], fs[k]};
    const double a = xs[std::max(k - 1, 0)];
    const double b = xs[std::min(k + 1, points - 1)];
    double x = local.x;
    if (df != nullptr && (*df)(a) < 0.0 && (*df)(b) > 0.0) {
      x = bisect_derivative(*df, a, b);
    } else if (b > a) {
      x = golden_section(f, a, b);
    }
    const LineMin refined{x, f(x)};
    if (better(refined, local)) local = refined;
    if (better(local, best)) best = local;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Compiled cost functions and their own-action derivatives.

struct CompiledGame {
  std::vector<CompiledExpression> cost;
  std::vector<std::optional<CompiledExpression>> own_derivative;
};

CompiledGame compile_costs(std::span<const Expression> costs) {
  CompiledGame cg;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    cg.cost.emplace_back(costs[i]);
    try {
      cg.own_derivative.emplace_back(CompiledExpression(partial(costs[i], VarId{i})));
    } catch (const NonDifferentiableError&) {
      cg.own_derivative.emplace_back(std::nullopt);
    }
  }
  return cg;
}

LineMin line_min_for_agent(const CompiledGame& cg, std::size_t i, std::vector<double>& u, const Box& box,
                           int points) {
  const double saved = u[i];
  std::function<double(double)> f = [&](double x) {
    u[i] = x;
    return cg.cost[i](u);
  };
  std::function<double(double)> df;
  if (cg.own_derivative[i]) {
    df = [&](double x) {
      u[i] = x;
      return (*cg.own_derivative[i])(u);
    };
  }
  const LineMin r = line_minimize(f, cg.own_derivative[i] ? &df : nullptr, box[i].lower(), box[i].upper(), points);
  u[i] = saved;
  return r;
}

double nash_residual(const CompiledGame& cg, std::vector<double> u, const Box& box, int points) {
  double worst = 0.0;
  for (std::size_t i = 0; i < cg.cost.size(); ++i) {
    const double current = cg.cost[i](u);
    const LineMin m = line_min_for_agent(cg, i, u, box, points);
    worst = std::max(worst, current - m.f);
  }
  return worst;
}

double cost_scale(const CompiledGame& cg, const std::vector<double>& u) {
  double s = 1.0;
  for (const auto& c : cg.cost) s = std::max(s, std::fabs(c(u)));
  return s;
}

// ---------------------------------------------------------------------------
// Box-constrained stationarity system F(u) = 0 (a variational inequality on
// the box), solved by semismooth Newton on the natural residual
// r(u) = u - P(u - F(u)).

struct StationaritySystem {
  std::size_t n = 0;
  std::vector<CompiledExpression> field;
  std::vector<std::vector<CompiledExpression>> jacobian;
  // Present when every component of F is affine with exact coefficients.
  std::optional<std::vector<AffineForm>> affine;
};

std::optional<StationaritySystem> make_system(const std::vector<Expression>& field) {
  StationaritySystem sys;
  sys.n = field.size();
  try {
    for (const auto& fi : field) {
      sys.field.emplace_back(fi);
      std::vector<CompiledExpression> row;
      for (std::size_t j = 0; j < sys.n; ++j) row.emplace_back(partial(fi, VarId{j}));
      sys.jacobian.push_back(std::move(row));
    }
  } catch (const NonDifferentiableError&) {
    return std::nullopt;
  }
  std::vector<AffineForm> forms;
  for (const auto& fi : field) {
    const auto poly = expand(fi);
    if (!poly) break;
    auto form = affine_form(*poly, sys.n);
    if (!form || !form->constant.is_exact()) break;
    const bool exact = std::all_of(form->coefficients.begin(), form->coefficients.end(),
                                   [](const Number& c) { return c.is_exact(); });
    if (!exact) break;
    forms.push_back(std::move(*form));
  }
  if (forms.size() == sys.n) sys.affine = std::move(forms);
  return sys;
}

std::optional<StationaritySystem> nash_system(std::span<const Expression> costs) {
  std::vector<Expression> field;
  try {
    for (std::size_t i = 0; i < costs.size(); ++i) field.push_back(partial(costs[i], VarId{i}));
  } catch (const NonDifferentiableError&) {
    return std::nullopt;
  }
  return make_system(field);
}

std::optional<StationaritySystem> gradient_system(const Expression& objective, std::size_t n) {
  std::vector<Expression> field;
  try {
    for (std::size_t i = 0; i < n; ++i) field.push_back(partial(objective, VarId{i}));
  } catch (const NonDifferentiableError&) {
    return std::nullopt;
  }
  return make_system(field);
}

Eigen::VectorXd natural_residual(const StationaritySystem& sys, const std::vector<double>& u,
                                 const std::vector<double>& lo, const std::vector<double>& hi) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(sys.n));
  for (std::size_t i = 0; i < sys.n; ++i) {
    const double z = std::clamp(u[i] - sys.field[i](u), lo[i], hi[i]);
    r[static_cast<Eigen::Index>(i)] = u[i] - z;
  }
  return r;
}

struct NewtonResult {
  std::vector<double> u;
  double residual;
  bool converged;
};

NewtonResult semismooth_newton(const StationaritySystem& sys, std::vector<double> u, const Box& box,
                               const SolverConfig& cfg) {
  const auto lo = lower_bounds(box);
  const auto hi = upper_bounds(box);
  const auto n = static_cast<Eigen::Index>(sys.n);
  for (std::size_t i = 0; i < sys.n; ++i) u[i] = std::clamp(u[i], lo[i], hi[i]);
  Eigen::VectorXd r = natural_residual(sys, u, lo, hi);
  for (int iter = 0; iter < kNewtonMaxIters; ++iter) {
    if (!std::isfinite(r.lpNorm<Eigen::Infinity>())) break;
    if (r.lpNorm<Eigen::Infinity>() <= cfg.tol_stationarity) break;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < sys.n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double z = u[i] - sys.field[i](u);
      if (z > lo[i] && z < hi[i]) {
        for (std::size_t j = 0; j < sys.n; ++j) jac(ii, static_cast<Eigen::Index>(j)) = sys.jacobian[i][j](u);
      } else {
        jac(ii, ii) = 1.0;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    Eigen::VectorXd step = lu.isInvertible() ? Eigen::VectorXd(lu.solve(-r))
                                             : Eigen::VectorXd(jac.completeOrthogonalDecomposition().solve(-r));
    const double merit = r.squaredNorm();
    bool accepted = false;
    for (double alpha = 1.0; alpha > 1e-10; alpha *= 0.5) {
      std::vector<double> trial(sys.n);
      for (std::size_t i = 0; i < sys.n; ++i) {
        trial[i] = std::clamp(u[i] + alpha * step[static_cast<Eigen::Index>(i)], lo[i], hi[i]);
      }
      const Eigen::VectorXd rt = natural_residual(sys, trial, lo, hi);
      if (std::isfinite(rt.squaredNorm()) && rt.squaredNorm() <= (1.0 - 1e-4 * alpha) * merit) {
        u = std::move(trial);
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  const double res = r.lpNorm<Eigen::Infinity>();
  return {u, res, res <= cfg.tol_stationarity};
}

// Re-solves the affine system exactly on the active set suggested by the
// floating solution. nullopt when the exact point is inconsistent with it.
std::optional<ActionProfile> exact_refinement(const StationaritySystem& sys, const std::vector<double>& u,
                                              const Box& box) {
  if (!sys.affine) return std::nullopt;
  const auto& forms = *sys.affine;
  const std::size_t n = sys.n;
  enum class Active { kFree, kLower, kUpper };
  std::vector<Active> active(n, Active::kFree);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = box[i].lower(), hi = box[i].upper();
    const double fi = sys.field[i](u);
    if (u[i] - lo <= 1e-7 * scale_of(lo) && fi >= -1e-7) active[i] = Active::kLower;
    if (hi - u[i] <= 1e-7 * scale_of(hi) && fi <= 1e-7) active[i] = Active::kUpper;
  }
  RationalMatrix a(n, std::vector<Rational>(n));
  std::vector<Rational> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i] == Active::kFree) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] = forms[i].coefficients[j].exact();
      b[i] = -forms[i].constant.exact();
    } else {
      a[i][i] = 1;
      b[i] = active[i] == Active::kLower ? box[i].lo : box[i].hi;
    }
  }
  const auto x = solve_exact(std::move(a), std::move(b));
  if (!x) return std::nullopt;
  std::vector<Number> values;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& xi = (*x)[i];
    if (xi < box[i].lo || xi > box[i].hi) return std::nullopt;
    if (std::fabs(xi.convert_to<double>() - u[i]) > kMergeDistance) return std::nullopt;
    Rational fi = forms[i].constant.exact();
    for (std::size_t j = 0; j < n; ++j) fi += forms[i].coefficients[j].exact() * (*x)[j];
    if (active[i] == Active::kLower && fi < 0) return std::nullopt;
    if (active[i] == Active::kUpper && fi > 0) return std::nullopt;
    values.emplace_back(xi);
  }
  return ActionProfile(std::move(values));
}

int method_rank(SolveMethod m) {
  switch (m) {
    case SolveMethod::kNewton:
      return 0;
    case SolveMethod::kBestResponse:
      return 1;
    case SolveMethod::kGrid:
      return 2;
  }
  return 3;
}

// Prefers exact profiles, then the method order Newton, best response, grid.
bool preferred(const EquilibriumResult& a, const EquilibriumResult& b) {
  if (a.profile.is_exact() != b.profile.is_exact()) return a.profile.is_exact();
  return method_rank(a.method) < method_rank(b.method);
}

std::vector<double> best_response_iteration(const CompiledGame& cg, const Box& box, const SolverConfig& cfg,
                                            bool& converged) {
  std::vector<double> u(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) u[i] = 0.5 * (box[i].lower() + box[i].upper());
  converged = false;
  for (int it = 0; it < cfg.br_max_iters; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const LineMin m = line_min_for_agent(cg, i, u, box, cfg.grid_points_per_axis);
      change = std::max(change, std::fabs(m.x - u[i]));
      u[i] = m.x;
    }
    if (change <= cfg.tol_fixed_point) {
      converged = true;
      break;
    }
  }
  return u;
}

// Visits every grid profile with u_0 as the most significant coordinate.
template <typename Visit>
void for_each_grid_index(std::size_t n, int m, Visit&& visit) {
  std::vector<int> idx(n, 0);
  while (true) {
    visit(idx);
    std::size_t d = n;
    while (d > 0) {
      --d;
      if (++idx[d] < m) break;
      idx[d] = 0;
      if (d == 0) return;
    }
    if (n == 0) return;
  }
}

void check_grid_budget(std::size_t n, int m, double per_point) {
  if (grid_size(n, m) * per_point > kGridBudget) {
    throw SolverError("grid of " + std::to_string(m) + "^" + std::to_string(n) +
                      " profiles exceeds the enumeration budget");
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (grid_points_per_axis < 3) throw std::invalid_argument("grid_points_per_axis must be at least 3");
  if (br_max_iters < 1) throw std::invalid_argument("br_max_iters must be positive");
  if (multistart_count < 1) throw std::invalid_argument("multistart_count must be positive");
  if (!(tol_fixed_point > 0.0) || !std::isfinite(tol_fixed_point)) {
    throw std::invalid_argument("tol_fixed_point must be positive");
  }
  if (!(tol_stationarity > 0.0) || !std::isfinite(tol_stationarity)) {
    throw std::invalid_argument("tol_stationarity must be positive");
  }
}

std::string_view to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::kBestResponse:
      return "best-response";
    case SolveMethod::kNewton:
      return "newton";
    case SolveMethod::kGrid:
      return "grid";
  }
  return "unknown";
}

std::string_view to_string(DefinitenessVerdict::Status s) {
  switch (s) {
    case DefinitenessVerdict::Status::kHolds:
      return "holds";
    case DefinitenessVerdict::Status::kHoldsOnSamples:
      return "holds-on-samples";
    case DefinitenessVerdict::Status::kFails:
      return "fails";
    case DefinitenessVerdict::Status::kUnknown:
      return "unknown";
  }
  return "unknown";
}

double grid_step(const Box& box, int points_per_axis) {
  double step = 0.0;
  for (const auto& iv : box) step = std::max(step, (iv.upper() - iv.lower()) / (points_per_axis - 1));
  return step;
}

double best_response(std::span<const Expression> costs, std::size_t i, std::span<const double> profile,
                     const Box& box, const SolverConfig& cfg) {
  cfg.validate();
  if (i >= costs.size()) throw std::out_of_range("agent index out of range");
  const CompiledGame cg = compile_costs(costs);
  std::vector<double> u(profile.begin(), profile.end());
  return line_min_for_agent(cg, i, u, box, cfg.grid_points_per_axis).x;
}

double verify_nash(std::span<const Expression> costs, const ActionProfile& u, const Box& box,
                   const SolverConfig& cfg) {
  cfg.validate();
  return nash_residual(compile_costs(costs), u.doubles(), box, cfg.grid_points_per_axis);
}

std::vector<EquilibriumResult> nash_equilibrium(std::span<const Expression> costs, const Box& box,
                                                const SolverConfig& cfg) {
  cfg.validate();
  if (box.size() != costs.size()) throw SolverError("one bound interval is required per agent");
  const CompiledGame cg = compile_costs(costs);
  const auto sys = nash_system(costs);

  std::vector<EquilibriumResult> candidates;
  auto consider = [&](const std::vector<double>& u, SolveMethod method, bool converged) {
    EquilibriumResult r;
    r.method = method;
    r.converged = converged;
    r.profile = ActionProfile::from_doubles(u);
    if (sys) {
      if (auto exact = exact_refinement(*sys, u, box)) r.profile = std::move(*exact);
    }
    const auto point = r.profile.doubles();
    r.residual = nash_residual(cg, point, box, cfg.grid_points_per_axis);
    if (r.residual > cfg.tol_fixed_point * cost_scale(cg, point)) return;
    r.on_boundary = touches_bound(point, box);
    candidates.push_back(std::move(r));
  };

  if (sys) {
    for (const auto& seed : seed_points(box, cfg.multistart_count)) {
      const NewtonResult nr = semismooth_newton(*sys, seed, box, cfg);
      if (nr.converged) consider(nr.u, SolveMethod::kNewton, true);
    }
  }
  bool br_converged = false;
  const auto br = best_response_iteration(cg, box, cfg, br_converged);
  if (br_converged) consider(br, SolveMethod::kBestResponse, true);

  if (candidates.empty() && grid_size(costs.size(), cfg.grid_points_per_axis) * costs.size() <= kGridBudget) {
    for (const auto& g : grid_nash_oracle(costs, box, cfg)) {
      std::vector<double> u = g.doubles();
      if (sys) {
        const NewtonResult nr = semismooth_newton(*sys, u, box, cfg);
        if (nr.converged) u = nr.u;
      }
      consider(u, SolveMethod::kGrid, false);
    }
  }

  std::vector<EquilibriumResult> merged;
  for (auto& c : candidates) {
    auto same = std::find_if(merged.begin(), merged.end(), [&](const EquilibriumResult& m) {
      return distance_inf(m.profile, c.profile) <= kMergeDistance;
    });
    if (same == merged.end()) {
      merged.push_back(std::move(c));
    } else if (preferred(c, *same)) {
      *same = std::move(c);
    }
  }
  std::sort(merged.begin(), merged.end(), [](const EquilibriumResult& a, const EquilibriumResult& b) {
    return lexicographically_less(a.profile.doubles(), b.profile.doubles());
  });
  return merged;
}

OperatorOptimum minimize_objective(const Expression& objective, const Box& box, const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t n = box.size();
  const CompiledExpression f(objective);

  // Seed grid, coarsened in higher dimension.
  int m = cfg.grid_points_per_axis;
  while (m > 3 && grid_size(n, m) > kSeedGridBudget) m = std::max(3, m / 2);
  const auto axes = grid_axes(box, m);
  struct GridPoint {
    std::vector<int> idx;
    double value;
  };
  std::vector<GridPoint> best_points;
  const auto keep = static_cast<std::size_t>(cfg.multistart_count);
  std::vector<double> u(n);
  for_each_grid_index(n, m, [&](const std::vector<int>& idx) {
    for (std::size_t i = 0; i < n; ++i) u[i] = axes[i][idx[i]].convert_to<double>();
    const double v = f(u);
    if (!std::isfinite(v)) return;
    if (best_points.size() < keep || v < best_points.back().value) {
      GridPoint gp{idx, v};
      auto pos = std::upper_bound(best_points.begin(), best_points.end(), gp,
                                  [](const GridPoint& a, const GridPoint& b) { return a.value < b.value; });
      best_points.insert(pos, std::move(gp));
      if (best_points.size() > keep) best_points.pop_back();
    }
  });

  struct Candidate {
    ActionProfile profile;
    double value;
  };
  std::vector<Candidate> candidates;
  auto consider = [&](ActionProfile p) {
    const double v = f(p.doubles());
    if (std::isfinite(v)) candidates.push_back({std::move(p), v});
  };

  std::vector<std::vector<double>> seeds = seed_points(box, 1);
  for (const auto& gp : best_points) {
    std::vector<Number> exact;
    std::vector<double> point;
    for (std::size_t i = 0; i < n; ++i) {
      exact.emplace_back(axes[i][gp.idx[i]]);
      point.push_back(axes[i][gp.idx[i]].convert_to<double>());
    }
    consider(ActionProfile(std::move(exact)));
    seeds.push_back(std::move(point));
  }

  const auto sys = gradient_system(objective, n);
  if (sys) {
    for (const auto& seed : seeds) {
      const NewtonResult nr = semismooth_newton(*sys, seed, box, cfg);
      if (!nr.converged) continue;
      if (auto exact = exact_refinement(*sys, nr.u, box)) {
        consider(std::move(*exact));
      } else {
        consider(ActionProfile::from_doubles(nr.u));
      }
    }
  } else {
    // Coordinate descent for non-differentiable objectives.
    std::vector<Expression> as_costs(n, objective);
    const CompiledGame cg = compile_costs(as_costs);
    for (auto point : seeds) {
      for (int it = 0; it < cfg.br_max_iters; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const LineMin lm = line_min_for_agent(cg, i, point, box, cfg.grid_points_per_axis);
          if (lm.f < f(point)) {
            change = std::max(change, std::fabs(lm.x - point[i]));
            point[i] = lm.x;
          }
        }
        if (change <= cfg.tol_fixed_point) break;
      }
      consider(ActionProfile::from_doubles(point));
    }
  }
  if (candidates.empty()) throw SolverError("objective is not finite anywhere on the grid");

  // Candidates at the same point keep the exact representative; among the
  // rest the smallest value wins, ties to the lexicographically smallest.
  std::vector<Candidate> merged;
  for (auto& c : candidates) {
    auto same = std::find_if(merged.begin(), merged.end(), [&](const Candidate& o) {
      return distance_inf(o.profile, c.profile) <= kMergeDistance &&
             std::fabs(o.value - c.value) <= 1e-9 * scale_of(c.value);
    });
    if (same == merged.end()) {
      merged.push_back(std::move(c));
    } else if ((c.profile.is_exact() && !same->profile.is_exact()) ||
               (c.profile.is_exact() == same->profile.is_exact() && c.value < same->value)) {
      *same = std::move(c);
    }
  }
  const Candidate* best = &merged.front();
  for (const auto& c : merged) {
    const double tol = kTieRelative * std::max(scale_of(c.value), scale_of(best->value));
    if (c.value < best->value - tol ||
        (c.value <= best->value + tol && lexicographically_less(c.profile.doubles(), best->profile.doubles()))) {
      best = &c;
    }
  }
  OperatorOptimum out;
  out.profile = best->profile;
  out.value = evaluate(objective, out.profile.values());
  out.on_boundary = touches_bound(out.profile.doubles(), box);
  return out;
}

OperatorOptimum minimize_operator(const Game& g, const SolverConfig& cfg) {
  return minimize_objective(g.operator_cost(), g.bounds(), cfg);
}

std::vector<ActionProfile> grid_nash_oracle(std::span<const Expression> costs, const Box& box,
                                            const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t n = costs.size();
  const int m = cfg.grid_points_per_axis;
  check_grid_budget(n, m, static_cast<double>(n));
  const auto axes = grid_axes(box, m);
  std::vector<std::vector<double>> axis_values(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& v : axes[i]) axis_values[i].push_back(v.convert_to<double>());
  }
  std::vector<CompiledExpression> compiled(costs.begin(), costs.end());

  const auto total = static_cast<std::size_t>(grid_size(n, m));
  std::vector<char> stable(total, 1);
  // Stride of coordinate i in the flat index (u_0 most significant).
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * static_cast<std::size_t>(m);

  std::vector<double> u(n), line(static_cast<std::size_t>(m));
  for (std::size_t agent = 0; agent < n; ++agent) {
    // Enumerate every line along this agent's axis.
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride[agent]) % static_cast<std::size_t>(m) != 0) continue;
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = axis_values[i][(base / stride[i]) % static_cast<std::size_t>(m)];
      }
      double lowest = std::numeric_limits<double>::infinity();
      for (int k = 0; k < m; ++k) {
        u[agent] = axis_values[agent][static_cast<std::size_t>(k)];
        line[static_cast<std::size_t>(k)] = compiled[agent](u);
        lowest = std::min(lowest, line[static_cast<std::size_t>(k)]);
      }
      for (int k = 0; k < m; ++k) {
        const double c = line[static_cast<std::size_t>(k)];
        if (lowest < c - kGridImproveRelative * scale_of(c)) {
          stable[base + static_cast<std::size_t>(k) * stride[agent]] = 0;
        }
      }
    }
  }
  std::vector<ActionProfile> out;
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (!stable[flat]) continue;
    std::vector<Number> values;
    for (std::size_t i = 0; i < n; ++i) values.emplace_back(axes[i][(flat / stride[i]) % static_cast<std::size_t>(m)]);
    out.emplace_back(std::move(values));
  }
  return out;
}

std::vector<ActionProfile> grid_minimizers(const Expression& objective, const Box& box, const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t n = box.size();
  const int m = cfg.grid_points_per_axis;
  check_grid_budget(n, m, 1.0);
  const auto axes = grid_axes(box, m);
  const CompiledExpression f(objective);
  std::vector<std::pair<std::vector<int>, double>> values;
  double lowest = std::numeric_limits<double>::infinity();
  std::vector<double> u(n);
  for_each_grid_index(n, m, [&](const std::vector<int>& idx) {
    for (std::size_t i = 0; i < n; ++i) u[i] = axes[i][idx[i]].convert_to<double>();
    const double v = f(u);
    lowest = std::min(lowest, v);
    values.emplace_back(idx, v);
  });
  std::vector<ActionProfile> out;
  for (const auto& [idx, v] : values) {
    if (v > lowest + kGridImproveRelative * scale_of(lowest)) continue;
    std::vector<Number> p;
    for (std::size_t i = 0; i < n; ++i) p.emplace_back(axes[i][idx[i]]);
    out.emplace_back(std::move(p));
  }
  return out;
}

DefinitenessVerdict positive_definite_check(const ExpressionMatrix& m, const Box& box, const SolverConfig& cfg) {
  cfg.validate();
  DefinitenessVerdict v;
  const std::size_t n = m.size();
  const bool constant = std::all_of(m.begin(), m.end(), [](const std::vector<Expression>& row) {
    return std::all_of(row.begin(), row.end(), [](const Expression& e) { return e.is_constant(); });
  });
  const bool exact = constant && std::all_of(m.begin(), m.end(), [](const std::vector<Expression>& row) {
                       return std::all_of(row.begin(), row.end(),
                                          [](const Expression& e) { return e.value().is_exact(); });
                     });
  if (exact) {
    RationalMatrix a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] = (m[i][j].value().exact() + m[j][i].value().exact()) / 2;
    }
    const PivotTest pt = exact_positive_definite(a);
    v.exact = true;
    v.samples = 1;
    v.status = pt.positive_definite ? DefinitenessVerdict::Status::kHolds : DefinitenessVerdict::Status::kFails;
    Eigen::MatrixXd dm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        dm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j].convert_to<double>();
      }
    }
    v.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dm).eigenvalues().minCoeff();
    if (!pt.positive_definite) {
      std::vector<Number> center;
      for (const auto& iv : box) center.emplace_back((iv.lo + iv.hi) / 2);
      v.witness = ActionProfile(std::move(center));
    }
    return v;
  }

  std::vector<std::vector<CompiledExpression>> compiled(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) compiled[i].emplace_back(m[i][j]);
  }
  std::vector<std::vector<double>> samples = seed_points(box, constant ? 1 : 64);
  if (!constant && n <= 10) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<double> corner(n);
      for (std::size_t i = 0; i < n; ++i) corner[i] = (mask >> i) & 1 ? box[i].upper() : box[i].lower();
      samples.push_back(std::move(corner));
    }
  }
  v.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& p : samples) {
    Eigen::MatrixXd dm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        dm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            0.5 * (compiled[i][j](p) + compiled[j][i](p));
      }
    }
    if (!dm.allFinite()) {
      v.status = DefinitenessVerdict::Status::kUnknown;
      return v;
    }
    const double lambda = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dm).eigenvalues().minCoeff();
    ++v.samples;
    const double threshold = 1e-12 * std::max(1.0, dm.cwiseAbs().maxCoeff());
    if (lambda < v.min_eigenvalue) v.min_eigenvalue = lambda;
    if (lambda <= threshold) {
      v.status = DefinitenessVerdict::Status::kFails;
      v.witness = ActionProfile::from_doubles(p);
      return v;
    }
  }
  v.status = constant ? DefinitenessVerdict::Status::kHolds : DefinitenessVerdict::Status::kHoldsOnSamples;
  return v;
}

DefinitenessVerdict hessian_pd_check(const Expression& e, const Box& box, const SolverConfig& cfg) {
  try {
    return positive_definite_check(hessian(e, box.size()), box, cfg);
  } catch (const NonDifferentiableError&) {
    return DefinitenessVerdict{};
  }
}

DefinitenessVerdict diagonal_strict_convexity_check(std::span<const Expression> costs, const Box& box,
                                                    const SolverConfig& cfg) {
  const std::size_t n = costs.size();
  try {
    ExpressionMatrix mixed(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Expression own = partial(costs[i], VarId{i});
      for (std::size_t j = 0; j < n; ++j) mixed[i].push_back(partial(own, VarId{j}));
    }
    ExpressionMatrix sym(n, std::vector<Expression>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) sym[i][j] = mixed[i][j] + mixed[j][i];
    }
    return positive_definite_check(sym, box, cfg);
  } catch (const NonDifferentiableError&) {
    return DefinitenessVerdict{};
  }
}

}  // namespace incentive
