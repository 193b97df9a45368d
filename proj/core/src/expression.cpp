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

#include "incentive/expression.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

#include "incentive/polynomial.hpp"

namespace incentive {

struct Expression::Node {
  Kind kind = Kind::kConstant;
  Number value;
  std::size_t var = 0;
  unsigned exponent = 0;
  std::vector<Expression> children;
};

namespace {

double ipow(double x, unsigned k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1U) r *= x;
    k >>= 1U;
    if (k > 0) x *= x;
  }
  return r;
}

}  // namespace

Expression::Expression() : Expression(Number(0)) {}

Expression::Expression(Number c) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kConstant;
  node->value = std::move(c);
  node_ = std::move(node);
}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression Expression::constant(Number c) { return Expression(std::move(c)); }

Expression Expression::variable(VarId v) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kVariable;
  node->var = v.index;
  return Expression(std::shared_ptr<const Node>(std::move(node)));
}

Expression Expression::sum(std::vector<Expression> terms) {
  std::vector<Expression> flat;
  Number c(0);
  auto take = [&](const Expression& t) {
    if (t.is_constant()) {
      c += t.value();
    } else {
      flat.push_back(t);
    }
  };
  for (const auto& t : terms) {
    if (t.kind() == Kind::kSum) {
      for (const auto& s : t.operands()) take(s);
    } else {
      take(t);
    }
  }
  if (!c.is_zero()) flat.push_back(constant(c));
  if (flat.empty()) return constant(c);
  if (flat.size() == 1) return flat.front();
  auto node = std::make_shared<Node>();
  node->kind = Kind::kSum;
  node->children = std::move(flat);
  return Expression(std::shared_ptr<const Node>(std::move(node)));
}

Expression Expression::product(std::vector<Expression> factors) {
  std::vector<Expression> flat;
  Number c(1);
  auto take = [&](const Expression& f) {
    if (f.is_constant()) {
      c *= f.value();
    } else {
      flat.push_back(f);
    }
  };
  for (const auto& f : factors) {
    if (f.kind() == Kind::kProduct) {
      for (const auto& s : f.operands()) take(s);
    } else {
      take(f);
    }
  }
  if (c.is_zero()) return constant(c);
  if (flat.empty()) return constant(c);
  if (!(c == Number(1))) flat.insert(flat.begin(), constant(c));
  if (flat.size() == 1) return flat.front();
  auto node = std::make_shared<Node>();
  node->kind = Kind::kProduct;
  node->children = std::move(flat);
  return Expression(std::shared_ptr<const Node>(std::move(node)));
}

Expression Expression::power(Expression base, unsigned exponent) {
  if (exponent == 0) return constant(Number(1));
  if (exponent == 1) return base;
  if (base.is_constant()) return constant(incentive::pow(base.value(), exponent));
  if (base.kind() == Kind::kPower) {
    return power(base.operands()[0], base.exponent() * exponent);
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::kPower;
  node->exponent = exponent;
  node->children = {std::move(base)};
  return Expression(std::shared_ptr<const Node>(std::move(node)));
}

Expression Expression::negate(Expression operand) {
  if (operand.is_constant()) return constant(-operand.value());
  if (operand.kind() == Kind::kNegate) return operand.operands()[0];
  auto node = std::make_shared<Node>();
  node->kind = Kind::kNegate;
  node->children = {std::move(operand)};
  return Expression(std::shared_ptr<const Node>(std::move(node)));
}

Expression Expression::abs(Expression operand) {
  if (operand.is_constant()) return constant(incentive::abs(operand.value()));
  auto node = std::make_shared<Node>();
  node->kind = Kind::kAbs;
  node->children = {std::move(operand)};
  return Expression(std::shared_ptr<const Node>(std::move(node)));
}

Expression Expression::guarded_quotient(Expression numerator, Expression denominator,
                                        Expression guard, Number threshold) {
  if (numerator.is_constant() && numerator.value().is_zero()) return constant(Number(0));
  if (numerator.is_constant() && denominator.is_constant() && guard.is_constant()) {
    if (guard.value() > threshold) return constant(numerator.value() / denominator.value());
    return constant(Number(0));
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::kGuardedQuotient;
  node->value = std::move(threshold);
  node->children = {std::move(numerator), std::move(denominator), std::move(guard)};
  return Expression(std::shared_ptr<const Node>(std::move(node)));
}

Expression::Kind Expression::kind() const { return node_->kind; }

const Number& Expression::value() const {
  assert(kind() == Kind::kConstant);
  return node_->value;
}

VarId Expression::var() const {
  assert(kind() == Kind::kVariable);
  return VarId{node_->var};
}

std::span<const Expression> Expression::operands() const { return node_->children; }

unsigned Expression::exponent() const {
  assert(kind() == Kind::kPower);
  return node_->exponent;
}

const Number& Expression::threshold() const {
  assert(kind() == Kind::kGuardedQuotient);
  return node_->value;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.var != y.var || x.exponent != y.exponent) return false;
  if (x.value.is_exact() != y.value.is_exact() || !(x.value == y.value)) return false;
  if (x.children.size() != y.children.size()) return false;
  for (std::size_t k = 0; k < x.children.size(); ++k) {
    if (!(x.children[k] == y.children[k])) return false;
  }
  return true;
}

Expression operator+(const Expression& a, const Expression& b) { return Expression::sum({a, b}); }

Expression operator-(const Expression& a, const Expression& b) {
  return Expression::sum({a, Expression::negate(b)});
}

Expression operator*(const Expression& a, const Expression& b) {
  return Expression::product({a, b});
}

Expression operator-(const Expression& a) { return Expression::negate(a); }

double evaluate(const Expression& e, std::span<const double> profile) {
  using Kind = Expression::Kind;
  switch (e.kind()) {
    case Kind::kConstant:
      return e.value().value();
    case Kind::kVariable: {
      const auto k = e.var().index;
      if (k >= profile.size()) {
        throw EvaluationError("variable u" + std::to_string(k + 1) + " is not assigned");
      }
      return profile[k];
    }
    case Kind::kSum: {
      double s = 0.0;
      for (const auto& t : e.operands()) s += evaluate(t, profile);
      return s;
    }
    case Kind::kProduct: {
      double p = 1.0;
      for (const auto& f : e.operands()) p *= evaluate(f, profile);
      return p;
    }
    case Kind::kPower:
      return ipow(evaluate(e.operands()[0], profile), e.exponent());
    case Kind::kNegate:
      return -evaluate(e.operands()[0], profile);
    case Kind::kAbs:
      return std::fabs(evaluate(e.operands()[0], profile));
    case Kind::kGuardedQuotient: {
      const auto ops = e.operands();
      if (!(evaluate(ops[2], profile) > e.threshold().value())) return 0.0;
      return evaluate(ops[0], profile) / evaluate(ops[1], profile);
    }
  }
  return 0.0;
}

Number evaluate(const Expression& e, std::span<const Number> profile) {
  using Kind = Expression::Kind;
  switch (e.kind()) {
    case Kind::kConstant:
      return e.value();
    case Kind::kVariable: {
      const auto k = e.var().index;
      if (k >= profile.size()) {
        throw EvaluationError("variable u" + std::to_string(k + 1) + " is not assigned");
      }
      return profile[k];
    }
    case Kind::kSum: {
      Number s(0);
      for (const auto& t : e.operands()) s += evaluate(t, profile);
      return s;
    }
    case Kind::kProduct: {
      Number p(1);
      for (const auto& f : e.operands()) p *= evaluate(f, profile);
      return p;
    }
    case Kind::kPower:
      return pow(evaluate(e.operands()[0], profile), e.exponent());
    case Kind::kNegate:
      return -evaluate(e.operands()[0], profile);
    case Kind::kAbs:
      return abs(evaluate(e.operands()[0], profile));
    case Kind::kGuardedQuotient: {
      const auto ops = e.operands();
      if (!(evaluate(ops[2], profile) > e.threshold())) return Number(0);
      return evaluate(ops[0], profile) / evaluate(ops[1], profile);
    }
  }
  return Number(0);
}

Expression partial(const Expression& e, VarId v) {
  using Kind = Expression::Kind;
  switch (e.kind()) {
    case Kind::kConstant:
      return Expression();
    case Kind::kVariable:
      return e.var() == v ? Expression(1) : Expression();
    case Kind::kSum: {
      std::vector<Expression> terms;
      for (const auto& t : e.operands()) terms.push_back(partial(t, v));
      return Expression::sum(std::move(terms));
    }
    case Kind::kProduct: {
      const auto factors = e.operands();
      std::vector<Expression> terms;
      for (std::size_t j = 0; j < factors.size(); ++j) {
        Expression d = partial(factors[j], v);
        if (d.is_constant() && d.value().is_zero()) continue;
        std::vector<Expression> prod(factors.begin(), factors.end());
        prod[j] = d;
        terms.push_back(Expression::product(std::move(prod)));
      }
      return Expression::sum(std::move(terms));
    }
    case Kind::kPower: {
      const auto& base = e.operands()[0];
      Expression d = partial(base, v);
      if (d.is_constant() && d.value().is_zero()) return Expression();
      return Expression::product({Expression(static_cast<int>(e.exponent())),
                                  Expression::power(base, e.exponent() - 1), d});
    }
    case Kind::kNegate:
      return Expression::negate(partial(e.operands()[0], v));
    case Kind::kAbs:
      throw NonDifferentiableError("absolute value is not differentiable");
    case Kind::kGuardedQuotient: {
      const auto ops = e.operands();
      Expression dn = partial(ops[0], v);
      Expression dd = partial(ops[1], v);
      Expression num = dn * ops[1] - ops[0] * dd;
      return Expression::guarded_quotient(num, Expression::power(ops[1], 2), ops[2],
                                          e.threshold());
    }
  }
  return Expression();
}

ExpressionMatrix hessian(const Expression& e, std::size_t n) {
  ExpressionMatrix h(n, std::vector<Expression>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Expression gi = partial(e, VarId{i});
    for (std::size_t j = i; j < n; ++j) {
      h[i][j] = partial(gi, VarId{j});
      h[j][i] = h[i][j];
    }
  }
  return h;
}

namespace {

void collect_variables(const Expression& e, std::set<VarId>& out) {
  if (e.kind() == Expression::Kind::kVariable) {
    out.insert(e.var());
    return;
  }
  for (const auto& c : e.operands()) collect_variables(c, out);
}

}  // namespace

std::set<VarId> dependencies(const Expression& e) {
  if (auto p = expand(e)) return p->variables();
  std::set<VarId> out;
  for (const auto& c : e.operands()) {
    auto d = dependencies(c);
    out.insert(d.begin(), d.end());
  }
  if (e.kind() == Expression::Kind::kVariable) out.insert(e.var());
  return out;
}

Separability separable_decomposition(const Expression& e, std::size_t n) {
  Separability result;
  std::vector<std::vector<Expression>> parts(n);
  Polynomial poly;
  std::vector<Expression> summands;
  if (e.kind() == Expression::Kind::kSum) {
    summands.assign(e.operands().begin(), e.operands().end());
  } else {
    summands.push_back(e);
  }
  bool unknown = false;
  for (const auto& s : summands) {
    if (auto p = expand(s)) {
      poly += *p;
      continue;
    }
    auto deps = dependencies(s);
    if (deps.size() >= 2) {
      unknown = true;
      continue;
    }
    const std::size_t owner = deps.empty() ? 0 : deps.begin()->index;
    if (owner >= n) {
      unknown = true;
      continue;
    }
    parts[owner].push_back(s);
  }
  if (n == 0) return result;
  for (const auto& [m, c] : poly.terms()) {
    std::size_t vars_in_monomial = 0;
    std::size_t owner = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] > 0) {
        ++vars_in_monomial;
        owner = k;
      }
    }
    if (vars_in_monomial >= 2) {
      result.status = Separability::Status::kNotSeparable;
      return result;
    }
    if (owner >= n) {
      result.status = Separability::Status::kNotSeparable;
      return result;
    }
    Polynomial single;
    single += Polynomial::constant(c);
    Polynomial mono = Polynomial::constant(Number(1));
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] > 0) mono = pow(Polynomial::variable(VarId{k}), m[k]);
    }
    parts[owner].push_back((single * mono).to_expression());
  }
  if (unknown) {
    result.status = Separability::Status::kUnknown;
    return result;
  }
  result.status = Separability::Status::kSeparable;
  for (auto& p : parts) result.terms.push_back(Expression::sum(std::move(p)));
  return result;
}

Expression substitute(const Expression& e, VarId v, const Expression& replacement) {
  using Kind = Expression::Kind;
  switch (e.kind()) {
    case Kind::kConstant:
      return e;
    case Kind::kVariable:
      return e.var() == v ? replacement : e;
    case Kind::kSum:
    case Kind::kProduct: {
      std::vector<Expression> ops;
      for (const auto& c : e.operands()) ops.push_back(substitute(c, v, replacement));
      return e.kind() == Kind::kSum ? Expression::sum(std::move(ops))
                                    : Expression::product(std::move(ops));
    }
    case Kind::kPower:
      return Expression::power(substitute(e.operands()[0], v, replacement), e.exponent());
    case Kind::kNegate:
      return Expression::negate(substitute(e.operands()[0], v, replacement));
    case Kind::kAbs:
      return Expression::abs(substitute(e.operands()[0], v, replacement));
    case Kind::kGuardedQuotient: {
      const auto ops = e.operands();
      return Expression::guarded_quotient(substitute(ops[0], v, replacement),
                                          substitute(ops[1], v, replacement),
                                          substitute(ops[2], v, replacement), e.threshold());
    }
  }
  return e;
}

bool contains_abs(const Expression& e) {
  if (e.kind() == Expression::Kind::kAbs) return true;
  for (const auto& c : e.operands()) {
    if (contains_abs(c)) return true;
  }
  return false;
}

bool contains_guarded_quotient(const Expression& e) {
  if (e.kind() == Expression::Kind::kGuardedQuotient) return true;
  for (const auto& c : e.operands()) {
    if (contains_guarded_quotient(c)) return true;
  }
  return false;
}

std::size_t variable_bound(const Expression& e) {
  std::set<VarId> vars;
  collect_variables(e, vars);
  return vars.empty() ? 0 : vars.rbegin()->index + 1;
}

namespace {

constexpr int kPrecSum = 1;
constexpr int kPrecProduct = 2;
constexpr int kPrecUnary = 3;
constexpr int kPrecAtom = 5;

class Printer {
 public:
  explicit Printer(std::span<const std::string> names) : names_(names) {}

  std::string render(const Expression& e, int min_prec) const {
    int prec = kPrecAtom;
    std::string s = body(e, prec);
    return prec < min_prec ? "(" + s + ")" : s;
  }

 private:
  std::string name(std::size_t k) const {
    if (k < names_.size()) return names_[k];
    return "u" + std::to_string(k + 1);
  }

  static std::string constant_text(const Number& c, int& prec) {
    std::string s = c.to_exact_string();
    const bool negative = c.sign() < 0;
    const bool fraction = s.find('/') != std::string::npos;
    prec = (negative || fraction) ? kPrecProduct : kPrecAtom;
    return s;
  }

  // Returns true and the positive counterpart when a sum term reads better
  // with a leading minus.
  static bool split_negative(const Expression& t, Expression& positive) {
    using Kind = Expression::Kind;
    if (t.kind() == Kind::kNegate) {
      positive = t.operands()[0];
      return true;
    }
    if (t.is_constant() && t.value().sign() < 0) {
      positive = Expression::constant(-t.value());
      return true;
    }
    if (t.kind() == Kind::kProduct && t.operands()[0].is_constant() &&
        t.operands()[0].value().sign() < 0) {
      std::vector<Expression> f(t.operands().begin(), t.operands().end());
      f[0] = Expression::constant(-f[0].value());
      positive = Expression::product(std::move(f));
      return true;
    }
    return false;
  }

  std::string body(const Expression& e, int& prec) const {
    using Kind = Expression::Kind;
    switch (e.kind()) {
      case Kind::kConstant:
        return constant_text(e.value(), prec);
      case Kind::kVariable:
        prec = kPrecAtom;
        return name(e.var().index);
      case Kind::kSum: {
        prec = kPrecSum;
        std::string s;
        bool first = true;
        for (const auto& t : e.operands()) {
          Expression positive;
          if (split_negative(t, positive)) {
            s += (first ? "-" : " - ") + render(positive, kPrecProduct);
          } else {
            s += first ? render(t, kPrecSum) : " + " + render(t, kPrecSum);
          }
          first = false;
        }
        return s;
      }
      case Kind::kProduct: {
        prec = kPrecProduct;
        const auto f = e.operands();
        std::string s;
        std::size_t start = 0;
        if (f[0].is_constant() && f[0].value() == Number(-1)) {
          s = "-";
          start = 1;
          prec = kPrecUnary;
        }
        for (std::size_t k = start; k < f.size(); ++k) {
          if (k > start) s += "*";
          s += render(f[k], k == start && start == 0 ? kPrecProduct : kPrecUnary);
        }
        return s;
      }
      case Kind::kPower:
        prec = kPrecUnary + 1;
        return render(e.operands()[0], kPrecAtom) + "^" + std::to_string(e.exponent());
      case Kind::kNegate:
        prec = kPrecUnary;
        return "-" + render(e.operands()[0], kPrecUnary);
      case Kind::kAbs:
        prec = kPrecAtom;
        return "abs(" + render(e.operands()[0], 0) + ")";
      case Kind::kGuardedQuotient: {
        prec = kPrecAtom;
        const auto ops = e.operands();
        return "guarded(" + render(ops[0], 0) + ", " + render(ops[1], 0) + ", " +
               render(ops[2], 0) + ", " + e.threshold().to_exact_string() + ")";
      }
    }
    return {};
  }

  std::span<const std::string> names_;
};

}  // namespace

std::string to_string(const Expression& e, std::span<const std::string> names) {
  return Printer(names).render(e, 0);
}

CompiledExpression::CompiledExpression(const Expression& e) { emit(e, 0); }

void CompiledExpression::emit(const Expression& e, std::size_t depth) {
  using Kind = Expression::Kind;
  max_depth_ = std::max(max_depth_, depth + 1);
  switch (e.kind()) {
    case Kind::kConstant:
      program_.push_back({Op::kConst, 0, e.value().value()});
      return;
    case Kind::kVariable:
      max_var_ = std::max(max_var_, e.var().index + 1);
      program_.push_back({Op::kVar, e.var().index, 0.0});
      return;
    case Kind::kSum:
    case Kind::kProduct: {
      const auto ops = e.operands();
      for (std::size_t j = 0; j < ops.size(); ++j) emit(ops[j], depth + j);
      program_.push_back({e.kind() == Kind::kSum ? Op::kAdd : Op::kMul, ops.size(), 0.0});
      return;
    }
    case Kind::kPower:
      emit(e.operands()[0], depth);
      program_.push_back({Op::kPow, e.exponent(), 0.0});
      return;
    case Kind::kNegate:
    case Kind::kAbs:
      emit(e.operands()[0], depth);
      program_.push_back({e.kind() == Kind::kNegate ? Op::kNeg : Op::kAbs, 0, 0.0});
      return;
    case Kind::kGuardedQuotient: {
      const auto ops = e.operands();
      for (std::size_t j = 0; j < 3; ++j) emit(ops[j], depth + j);
      program_.push_back({Op::kGuard, 0, e.threshold().value()});
      return;
    }
  }
}

double CompiledExpression::operator()(std::span<const double> profile) const {
  if (max_var_ > profile.size()) {
    throw EvaluationError("variable u" + std::to_string(max_var_) + " is not assigned");
  }
  std::array<double, 64> small{};
  std::vector<double> large;
  double* stack = small.data();
  if (max_depth_ > small.size()) {
    large.resize(max_depth_);
    stack = large.data();
  }
  std::size_t top = 0;
  for (const auto& ins : program_) {
    switch (ins.op) {
      case Op::kConst:
        stack[top++] = ins.value;
        break;
      case Op::kVar:
        stack[top++] = profile[ins.arg];
        break;
      case Op::kAdd: {
        double s = 0.0;
        for (std::size_t k = top - ins.arg; k < top; ++k) s += stack[k];
        top -= ins.arg;
        stack[top++] = s;
        break;
      }
      case Op::kMul: {
        double p = 1.0;
        for (std::size_t k = top - ins.arg; k < top; ++k) p *= stack[k];
        top -= ins.arg;
        stack[top++] = p;
        break;
      }
      case Op::kPow:
        stack[top - 1] = ipow(stack[top - 1], static_cast<unsigned>(ins.arg));
        break;
      case Op::kNeg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::kAbs:
        stack[top - 1] = std::fabs(stack[top - 1]);
        break;
      case Op::kGuard: {
        const double guard = stack[top - 1];
        const double den = stack[top - 2];
        const double num = stack[top - 3];
        top -= 3;
        stack[top++] = guard > ins.value ? num / den : 0.0;
        break;
      }
    }
  }
  return top == 0 ? 0.0 : stack[top - 1];
}

}  // namespace incentive
