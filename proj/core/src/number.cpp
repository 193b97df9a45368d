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

#include "incentive/number.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace incentive {
namespace {

using boost::multiprecision::cpp_int;

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational pow10(int e) {
  cpp_int p = 1;
  for (int k = 0; k < (e < 0 ? -e : e); ++k) p *= 10;
  return e < 0 ? Rational(cpp_int(1), p) : Rational(p);
}

std::optional<Rational> parse_decimal(std::string_view s) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  cpp_int mantissa = 0;
  int scale = 0;
  bool digits = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    mantissa = mantissa * 10 + (s[i++] - '0');
    digits = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      mantissa = mantissa * 10 + (s[i++] - '0');
      --scale;
      digits = true;
    }
  }
  if (!digits) return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) exp_negative = s[i++] == '-';
    int exponent = 0;
    bool exp_digits = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      exponent = exponent * 10 + (s[i++] - '0');
      if (exponent > 4000) return std::nullopt;
      exp_digits = true;
    }
    if (!exp_digits) return std::nullopt;
    scale += exp_negative ? -exponent : exponent;
  }
  if (i != s.size()) return std::nullopt;
  Rational r = Rational(mantissa) * pow10(scale);
  return negative ? Rational(-r) : r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  auto num = parse_decimal(trim(text.substr(0, slash)));
  auto den = parse_decimal(trim(text.substr(slash + 1)));
  if (!num || !den || *den == 0) return std::nullopt;
  return *num / *den;
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Number::Number(Rational r) : exact_(std::move(r)), value_(to_double(*exact_)) {}

Number Number::inexact(double v) {
  Number n;
  n.exact_.reset();
  n.value_ = v;
  return n;
}

bool Number::is_zero() const { return exact_ ? *exact_ == 0 : value_ == 0.0; }

int Number::sign() const {
  if (exact_) return exact_->sign();
  return (value_ > 0) - (value_ < 0);
}

Number Number::operator-() const {
  if (exact_) return Number(Rational(-*exact_));
  return inexact(-value_);
}

Number& Number::operator+=(const Number& o) {
  if (exact_ && o.exact_) {
    *exact_ += *o.exact_;
    value_ = to_double(*exact_);
  } else {
    exact_.reset();
    value_ += o.value_;
  }
  return *this;
}

Number& Number::operator-=(const Number& o) { return *this += -o; }

Number& Number::operator*=(const Number& o) {
  if (exact_ && o.exact_) {
    *exact_ *= *o.exact_;
    value_ = to_double(*exact_);
  } else {
    exact_.reset();
    value_ *= o.value_;
  }
  return *this;
}

Number& Number::operator/=(const Number& o) {
  if (exact_ && o.exact_) {
    if (*o.exact_ == 0) throw std::domain_error("exact division by zero");
    *exact_ /= *o.exact_;
    value_ = to_double(*exact_);
  } else {
    exact_.reset();
    value_ /= o.value_;
  }
  return *this;
}

std::partial_ordering operator<=>(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    if (*a.exact_ < *b.exact_) return std::partial_ordering::less;
    if (*a.exact_ > *b.exact_) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }
  return a.value_ <=> b.value_;
}

bool operator==(const Number& a, const Number& b) {
  return (a <=> b) == std::partial_ordering::equivalent;
}

std::string Number::to_string() const {
  std::string text = format_double(value_);
  if (!exact_) return text;
  auto shown = parse_rational(text);
  if (shown && *shown == *exact_) return text;
  return text + " (=" + incentive::to_string(*exact_) + ")";
}

std::string Number::to_exact_string() const {
  if (exact_) return incentive::to_string(*exact_);
  if (value_ == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value_);
  return buf;
}

Number abs(const Number& x) { return x.sign() < 0 ? -x : x; }

Number pow(const Number& base, unsigned exponent) {
  Number result(1);
  Number b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

}  // namespace incentive
