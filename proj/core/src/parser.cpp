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

#include "incentive/parser.hpp"

#include <cctype>

namespace incentive {
namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> vars) : text_(text), vars_(vars) {}

  Expression parse() {
    skip_space();
    if (at_end()) throw ParseError("empty expression", pos_);
    Expression e = expr();
    skip_space();
    if (!at_end()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  Expression expr() {
    std::vector<Expression> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(Expression::negate(term()));
      } else {
        break;
      }
    }
    return Expression::sum(std::move(terms));
  }

  Expression term() {
    Expression acc = unary();
    for (;;) {
      skip_space();
      const std::size_t op_pos = pos_;
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        Expression divisor = unary();
        if (!divisor.is_constant()) {
          throw ParseError("division is only allowed by a constant", op_pos);
        }
        if (divisor.value().is_zero()) throw ParseError("division by zero", op_pos);
        acc = acc * Expression::constant(Number(1) / divisor.value());
      } else {
        return acc;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return Expression::negate(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expression power() {
    Expression base = primary();
    skip_space();
    const std::size_t op_pos = pos_;
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    while (!at_end() && is_digit(peek())) ++pos_;
    if (start == pos_) {
      throw ParseError("exponent must be a nonnegative integer literal", start);
    }
    const auto digits = text_.substr(start, pos_ - start);
    if (digits.size() > 4) throw ParseError("exponent too large", start);
    skip_space();
    if (peek() == '^') throw ParseError("chained exponents need parentheses", op_pos);
    return Expression::power(std::move(base), static_cast<unsigned>(std::stoul(std::string(digits))));
  }

  Expression primary() {
    skip_space();
    if (at_end()) throw ParseError("unexpected end of expression", pos_);
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expression inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (is_digit(c) || c == '.') return number();
    if (is_ident_start(c)) return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expression number() {
    const std::size_t start = pos_;
    while (!at_end() && is_digit(peek())) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (!at_end() && is_digit(peek())) ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && is_digit(text_[look])) {
        pos_ = look;
        while (!at_end() && is_digit(peek())) ++pos_;
      }
    }
    auto value = parse_rational(text_.substr(start, pos_ - start));
    if (!value) throw ParseError("malformed number", start);
    return Expression::constant(Number(*value));
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (!at_end() && is_ident_char(peek())) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (name == "abs") {
      if (!accept('(')) throw ParseError("expected '(' after abs", pos_);
      Expression inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return Expression::abs(std::move(inner));
    }
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      if (vars_[k] == name) return Expression::variable(VarId{k});
    }
    throw ParseError("unknown variable '" + name + "'", start);
  }

  std::string_view text_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text, std::span<const std::string> vars) {
  return Parser(text, vars).parse();
}

}  // namespace incentive
