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

#include "incentive/polynomial.hpp"

#include <algorithm>

namespace incentive {
namespace {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out(std::max(a.size(), b.size()), 0);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
  return out;
}

}  // namespace

Polynomial Polynomial::constant(const Number& c) {
  Polynomial p;
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(VarId v) {
  Polynomial p;
  Monomial m(v.index + 1, 0);
  m[v.index] = 1;
  p.add_term(std::move(m), Number(1));
  return p;
}

void Polynomial::add_term(Monomial m, const Number& c) {
  trim(m);
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(std::move(m), c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) {
    unsigned total = 0;
    for (unsigned e : m) total += e;
    d = std::max(d, total);
  }
  return d;
}

std::set<VarId> Polynomial::variables() const {
  std::set<VarId> vars;
  for (const auto& [m, c] : terms_) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] > 0) vars.insert(VarId{k});
    }
  }
  return vars;
}

Number Polynomial::coefficient(const Monomial& m) const {
  Monomial key = m;
  trim(key);
  auto it = terms_.find(key);
  return it == terms_.end() ? Number(0) : it->second;
}

Expression Polynomial::to_expression() const {
  std::vector<Expression> summands;
  for (const auto& [m, c] : terms_) {
    std::vector<Expression> factors{Expression::constant(c)};
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] > 0) factors.push_back(Expression::power(Expression::variable(VarId{k}), m[k]));
    }
    summands.push_back(Expression::product(std::move(factors)));
  }
  return Expression::sum(std::move(summands));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  Polynomial out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) out.add_term(multiply(ma, mb), ca * cb);
  }
  *this = std::move(out);
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  }
  return true;
}

Polynomial pow(const Polynomial& base, unsigned exponent) {
  Polynomial result = Polynomial::constant(Number(1));
  Polynomial b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

std::optional<Polynomial> expand(const Expression& e) {
  using Kind = Expression::Kind;
  switch (e.kind()) {
    case Kind::kConstant:
      return Polynomial::constant(e.value());
    case Kind::kVariable:
      return Polynomial::variable(e.var());
    case Kind::kSum: {
      Polynomial acc;
      for (const auto& t : e.operands()) {
        auto p = expand(t);
        if (!p) return std::nullopt;
        acc += *p;
      }
      return acc;
    }
    case Kind::kProduct: {
      Polynomial acc = Polynomial::constant(Number(1));
      for (const auto& f : e.operands()) {
        auto p = expand(f);
        if (!p) return std::nullopt;
        acc *= *p;
      }
      return acc;
    }
    case Kind::kPower: {
      auto p = expand(e.operands()[0]);
      if (!p) return std::nullopt;
      return pow(*p, e.exponent());
    }
    case Kind::kNegate: {
      auto p = expand(e.operands()[0]);
      if (!p) return std::nullopt;
      return -*p;
    }
    case Kind::kAbs:
    case Kind::kGuardedQuotient:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<AffineForm> affine_form(const Polynomial& p, std::size_t n) {
  if (p.degree() > 1) return std::nullopt;
  AffineForm form;
  form.coefficients.assign(n, Number(0));
  for (const auto& [m, c] : p.terms()) {
    if (m.empty()) {
      form.constant = c;
      continue;
    }
    const std::size_t k = m.size() - 1;
    if (k >= n) return std::nullopt;
    form.coefficients[k] = c;
  }
  return form;
}

}  // namespace incentive
