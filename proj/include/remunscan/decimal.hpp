/*
 * Copyright 2026 The remunscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "remunscan/error.hpp"

namespace remunscan {

/// Exact base-10 fixed-point number: value = mantissa / 10^scale.
///
/// Used for every fiat and exchange-rate quantity so that reports are
/// bit-identical across platforms. Arithmetic never rounds; an operation
/// that would overflow the 128-bit mantissa throws a domain error.
class Decimal {
 public:
  using Mantissa = __int128;
  static constexpr int kMaxScale = 36;

  constexpr Decimal() = default;
  constexpr Decimal(std::int64_t integer) : mantissa_(integer) {}  // NOLINT: implicit by intent

  static Decimal from_parts(Mantissa mantissa, int scale) {
    if (scale < 0 || scale > kMaxScale) {
      throw Error(ErrorKind::domain, "decimal scale out of range: " + std::to_string(scale));
    }
    Decimal d;
    d.mantissa_ = mantissa;
    d.scale_ = scale;
    return d;
  }

  /// Parses `[-]digits[.digits]`. No exponent, no grouping, no leading '+'.
  static Decimal parse(std::string_view text) {
    Decimal d;
    bool negative = false;
    std::size_t i = 0;
    if (i < text.size() && text[i] == '-') {
      negative = true;
      ++i;
    }
    bool any_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '.') {
        if (seen_point) throw Error(ErrorKind::parse, "malformed decimal '" + std::string(text) + "'");
        seen_point = true;
        continue;
      }
      if (c < '0' || c > '9') throw Error(ErrorKind::parse, "malformed decimal '" + std::string(text) + "'");
      any_digit = true;
      d.mantissa_ = checked_mul(d.mantissa_, 10);
      d.mantissa_ = checked_add(d.mantissa_, c - '0');
      if (seen_point) {
        if (++d.scale_ > kMaxScale) throw Error(ErrorKind::precision, "too many fractional digits");
      }
    }
    if (!any_digit) throw Error(ErrorKind::parse, "malformed decimal '" + std::string(text) + "'");
    if (negative) d.mantissa_ = -d.mantissa_;
    return d;
  }

  /// Rounds `value` half-away-from-zero to `digits` fractional digits.
  static Decimal from_double(double value, int digits) {
    long double scaled = static_cast<long double>(value);
    for (int k = 0; k < digits; ++k) scaled *= 10.0L;
    const long double rounded = scaled < 0 ? -static_cast<long double>(static_cast<Mantissa>(-scaled + 0.5L))
                                           : static_cast<long double>(static_cast<Mantissa>(scaled + 0.5L));
    return from_parts(static_cast<Mantissa>(rounded), digits).normalized();
  }

  constexpr Mantissa mantissa() const noexcept { return mantissa_; }
  constexpr int scale() const noexcept { return scale_; }

  bool is_positive() const noexcept { return mantissa_ > 0; }
  bool is_zero() const noexcept { return mantissa_ == 0; }

  /// Same value, trailing fractional zeros stripped.
  Decimal normalized() const {
    Decimal d = *this;
    while (d.scale_ > 0 && d.mantissa_ % 10 == 0) {
      d.mantissa_ /= 10;
      --d.scale_;
    }
    return d;
  }

  /// Same value with at least `scale` fractional digits.
  Decimal with_scale(int scale) const {
    if (scale <= scale_) return *this;
    return from_parts(checked_mul(mantissa_, pow10(scale - scale_)), scale);
  }

  Decimal halved() const { return from_parts(checked_mul(mantissa_, 5), scale_ + 1); }

  double to_double() const noexcept {
    long double v = static_cast<long double>(mantissa_);
    for (int k = 0; k < scale_; ++k) v /= 10.0L;
    return static_cast<double>(v);
  }

  /// Plain decimal notation with at least `min_frac` fractional digits and
  /// no superfluous trailing zeros beyond that.
  std::string to_string(int min_frac = 0) const {
    Decimal d = normalized();
    if (d.scale_ < min_frac) d = d.with_scale(min_frac);
    const bool negative = d.mantissa_ < 0;
    unsigned __int128 magnitude =
        negative ? static_cast<unsigned __int128>(-(d.mantissa_ + 1)) + 1 : static_cast<unsigned __int128>(d.mantissa_);
    std::string digits;
    do {
      digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(magnitude % 10)));
      magnitude /= 10;
    } while (magnitude != 0);
    if (static_cast<int>(digits.size()) <= d.scale_) {
      digits.insert(0, static_cast<std::size_t>(d.scale_) + 1 - digits.size(), '0');
    }
    if (d.scale_ > 0) digits.insert(digits.size() - static_cast<std::size_t>(d.scale_), 1, '.');
    return negative ? "-" + digits : digits;
  }

  friend Decimal operator+(const Decimal& a, const Decimal& b) {
    const int scale = a.scale_ > b.scale_ ? a.scale_ : b.scale_;
    return from_parts(checked_add(a.with_scale(scale).mantissa_, b.with_scale(scale).mantissa_), scale);
  }

  friend Decimal operator-(const Decimal& a, const Decimal& b) {
    return a + from_parts(-b.mantissa_, b.scale_);
  }

  friend Decimal operator*(const Decimal& a, const Decimal& b) {
    return from_parts(checked_mul(a.mantissa_, b.mantissa_), a.scale_ + b.scale_);
  }

  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    const int scale = a.scale_ > b.scale_ ? a.scale_ : b.scale_;
    const Mantissa x = a.with_scale(scale).mantissa_;
    const Mantissa y = b.with_scale(scale).mantissa_;
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend bool operator==(const Decimal& a, const Decimal& b) { return (a <=> b) == 0; }

  static Mantissa pow10(int exponent) {
    Mantissa p = 1;
    for (int k = 0; k < exponent; ++k) p = checked_mul(p, 10);
    return p;
  }

  static Mantissa checked_mul(Mantissa a, Mantissa b) {
    Mantissa out;
    if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::domain, "decimal overflow");
    return out;
  }

  static Mantissa checked_add(Mantissa a, Mantissa b) {
    Mantissa out;
    if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorKind::domain, "decimal overflow");
    return out;
  }

 private:
  Mantissa mantissa_ = 0;
  int scale_ = 0;
};

/// num / den rounded to the nearest integer, ties to even.
inline Decimal::Mantissa divide_round_half_even(const Decimal& num, const Decimal& den) {
  if (den.is_zero()) throw Error(ErrorKind::domain, "division by zero");
  const int scale = num.scale() > den.scale() ? num.scale() : den.scale();
  Decimal::Mantissa n = num.with_scale(scale).mantissa();
  Decimal::Mantissa d = den.with_scale(scale).mantissa();
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Decimal::Mantissa q = n / d;
  Decimal::Mantissa r = n % d;
  if (r < 0) {
    r += d;
    q -= 1;
  }
  const Decimal::Mantissa twice = Decimal::checked_mul(r, 2);
  if (twice > d || (twice == d && (q % 2 != 0))) q += 1;
  return q;
}

}  // namespace remunscan
