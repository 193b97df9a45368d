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

#ifndef INCENTIVE_NUMBER_HPP_
#define INCENTIVE_NUMBER_HPP_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace incentive {

using Rational = boost::multiprecision::cpp_rational;

// Parses "3", "-3/4", "0.25", "1e-3" into an exact rational. Returns nullopt
// on malformed input or a zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

std::string to_string(const Rational& r);

// A real value that stays an exact rational for as long as every operand it
// was computed from was exact. Once a floating operand enters, the result is
// carried as a double only.
class Number {
 public:
  Number() : exact_(Rational(0)), value_(0.0) {}
  Number(int v) : exact_(Rational(v)), value_(v) {}  // NOLINT(implicit)
  Number(Rational r);                                 // NOLINT(implicit)

  static Number inexact(double v);

  bool is_exact() const { return exact_.has_value(); }
  double value() const { return value_; }
  // Precondition: is_exact().
  const Rational& exact() const { return *exact_; }

  bool is_zero() const;
  int sign() const;

  Number operator-() const;
  Number& operator+=(const Number& o);
  Number& operator-=(const Number& o);
  Number& operator*=(const Number& o);
  // Throws std::domain_error on an exact zero divisor.
  Number& operator/=(const Number& o);

  friend Number operator+(Number a, const Number& b) { return a += b; }
  friend Number operator-(Number a, const Number& b) { return a -= b; }
  friend Number operator*(Number a, const Number& b) { return a *= b; }
  friend Number operator/(Number a, const Number& b) { return a /= b; }

  // Exact comparison when both sides are exact, floating otherwise.
  friend std::partial_ordering operator<=>(const Number& a, const Number& b);
  friend bool operator==(const Number& a, const Number& b);

  // 12 significant digits, with an "(=p/q)" annotation when exact and the
  // decimal rendering is not already exact.
  std::string to_string() const;
  // Exact "p/q" when exact, shortest round-trip decimal otherwise.
  std::string to_exact_string() const;

 private:
  std::optional<Rational> exact_;
  double value_;
};

Number abs(const Number& x);
Number pow(const Number& base, unsigned exponent);

// Formats a double with 12 significant digits, normalizing -0 to 0.
std::string format_double(double v);

}  // namespace incentive

#endif  // INCENTIVE_NUMBER_HPP_
