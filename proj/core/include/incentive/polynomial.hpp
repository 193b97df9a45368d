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

#ifndef INCENTIVE_POLYNOMIAL_HPP_
#define INCENTIVE_POLYNOMIAL_HPP_

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "incentive/expression.hpp"
#include "incentive/number.hpp"

namespace incentive {

// Exponent of each variable, trailing zeros trimmed; the empty monomial is
// the constant term.
using Monomial = std::vector<unsigned>;

// Expanded multivariate polynomial with Number coefficients. Zero
// coefficients are never stored, so two polynomials are equal iff their term
// maps are equal.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(const Number& c);
  static Polynomial variable(VarId v);

  const std::map<Monomial, Number>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;
  std::set<VarId> variables() const;
  // Coefficient of `m` (zero when absent).
  Number coefficient(const Monomial& m) const;
  Expression to_expression() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial operator-() const;
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a += -b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  void add_term(Monomial m, const Number& c);
  std::map<Monomial, Number> terms_;
};

Polynomial pow(const Polynomial& base, unsigned exponent);

// nullopt when the expression contains abs or guarded-quotient nodes.
std::optional<Polynomial> expand(const Expression& e);

// For an affine polynomial, the coefficient of each of the n variables and the
// constant term. nullopt when the degree exceeds one.
struct AffineForm {
  std::vector<Number> coefficients;
  Number constant;
};
std::optional<AffineForm> affine_form(const Polynomial& p, std::size_t n);

}  // namespace incentive

#endif  // INCENTIVE_POLYNOMIAL_HPP_
