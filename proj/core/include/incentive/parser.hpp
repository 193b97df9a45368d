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

#ifndef INCENTIVE_PARSER_HPP_
#define INCENTIVE_PARSER_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "incentive/expression.hpp"

namespace incentive {

class ParseError : public ExpressionError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : ExpressionError(message), position_(position) {}
  // Zero-based offset into the parsed text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Grammar, loosest binding first:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*      division only by nonzero constants
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?
//   primary := number | identifier | 'abs' '(' expr ')' | '(' expr ')'
// Numbers are decimals (optionally with an exponent) and are kept exact, so
// "3/4" is the rational three quarters. `vars[k]` names variable u_k.
Expression parse_expression(std::string_view text, std::span<const std::string> vars);

}  // namespace incentive

#endif  // INCENTIVE_PARSER_HPP_
