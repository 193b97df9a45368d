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

#ifndef INCENTIVE_EXPRESSION_HPP_
#define INCENTIVE_EXPRESSION_HPP_

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "incentive/number.hpp"

namespace incentive {

// Index of an agent's scalar action u_i (zero based).
struct VarId {
  std::size_t index = 0;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvaluationError : public ExpressionError {
 public:
  using ExpressionError::ExpressionError;
};

class NonDifferentiableError : public ExpressionError {
 public:
  using ExpressionError::ExpressionError;
};

// Immutable expression tree over agent actions. Copies share structure and
// are cheap; every operation below is pure.
//
// The factories apply light local simplification (flattening nested sums and
// products, folding constants, dropping additive zeros) so derivative trees do
// not grow without bound. Canonical comparison goes through expand().
class Expression {
 public:
  enum class Kind {
    kConstant,
    kVariable,
    kSum,
    kProduct,
    kPower,
    kNegate,
    kAbs,
    // numerator / denominator while guard > threshold, zero otherwise. Only
    // built by the engine (never by the parser).
    kGuardedQuotient,
  };

  Expression();  // constant zero
  Expression(Number c);  // NOLINT(implicit)
  Expression(int c) : Expression(Number(c)) {}  // NOLINT(implicit)

  static Expression constant(Number c);
  static Expression variable(VarId v);
  static Expression sum(std::vector<Expression> terms);
  static Expression product(std::vector<Expression> factors);
  static Expression power(Expression base, unsigned exponent);
  static Expression negate(Expression operand);
  static Expression abs(Expression operand);
  static Expression guarded_quotient(Expression numerator, Expression denominator,
                                     Expression guard, Number threshold);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::kConstant; }
  // kConstant only.
  const Number& value() const;
  // kVariable only.
  VarId var() const;
  // Children in order; for kGuardedQuotient: numerator, denominator, guard.
  std::span<const Expression> operands() const;
  // kPower only.
  unsigned exponent() const;
  // kGuardedQuotient only.
  const Number& threshold() const;

  friend bool operator==(const Expression& a, const Expression& b);

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

using ExpressionMatrix = std::vector<std::vector<Expression>>;

// Throws EvaluationError if a variable index is outside `profile`.
double evaluate(const Expression& e, std::span<const double> profile);
// Exact when every profile entry and constant involved is exact.
Number evaluate(const Expression& e, std::span<const Number> profile);

// Symbolic partial derivative. Throws NonDifferentiableError on abs nodes.
Expression partial(const Expression& e, VarId v);
ExpressionMatrix hessian(const Expression& e, std::size_t n);

// Variables with a nonzero coefficient after polynomial expansion. Subtrees
// that cannot be expanded contribute every variable they mention.
std::set<VarId> dependencies(const Expression& e);

struct Separability {
  enum class Status { kSeparable, kNotSeparable, kUnknown };
  Status status = Status::kUnknown;
  // One term per variable u_0..u_{n-1} when separable; the constant part of
  // the expression is attached to the first term.
  std::vector<Expression> terms;
};
Separability separable_decomposition(const Expression& e, std::size_t n);

Expression substitute(const Expression& e, VarId v, const Expression& replacement);

bool contains_abs(const Expression& e);
bool contains_guarded_quotient(const Expression& e);
// One past the largest variable index referenced, 0 for constants.
std::size_t variable_bound(const Expression& e);

// Renders with the given variable names, or u1..un (one based) when empty.
// The output of a parser-representable expression parses back to an
// equivalent expression.
std::string to_string(const Expression& e, std::span<const std::string> names = {});

// Flat postfix program for fast repeated floating evaluation.
class CompiledExpression {
 public:
  CompiledExpression() = default;
  explicit CompiledExpression(const Expression& e);
  double operator()(std::span<const double> profile) const;

 private:
  enum class Op : unsigned char { kConst, kVar, kAdd, kMul, kPow, kNeg, kAbs, kGuard };
  struct Instruction {
    Op op;
    std::size_t arg;
    double value;
  };
  std::vector<Instruction> program_;
  std::size_t max_depth_ = 0;
  std::size_t max_var_ = 0;

  void emit(const Expression& e, std::size_t depth);
};

}  // namespace incentive

#endif  // INCENTIVE_EXPRESSION_HPP_
