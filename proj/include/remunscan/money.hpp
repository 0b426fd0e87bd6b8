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

#include <cstdint>
#include <string>
#include <string_view>

#include "remunscan/decimal.hpp"
#include "remunscan/error.hpp"

namespace remunscan {

/// Amount in satoshi. All on-chain money is carried in this unit.
using Sat = std::int64_t;

inline constexpr Sat kSatPerBtc = 100'000'000;
inline constexpr int kBtcDecimals = 8;

/// Exact conversion of a BTC decimal string ("0.01413267") to satoshi.
inline Sat btc_to_sat(std::string_view btc) {
  if (btc.empty()) throw Error(ErrorKind::parse, "empty BTC amount");
  if (btc.front() == '-') throw Error(ErrorKind::domain, "BTC amount must be positive: " + std::string(btc));
  const auto point = btc.find('.');
  if (point != std::string_view::npos && btc.size() - point - 1 > kBtcDecimals) {
    throw Error(ErrorKind::precision, "more than 8 fractional digits: " + std::string(btc));
  }
  const Decimal value = Decimal::parse(btc);
  if (!value.is_positive()) throw Error(ErrorKind::domain, "BTC amount must be positive: " + std::string(btc));
  const Decimal::Mantissa sat = value.with_scale(kBtcDecimals).mantissa();
  if (sat > INT64_MAX) throw Error(ErrorKind::domain, "BTC amount out of range: " + std::string(btc));
  return static_cast<Sat>(sat);
}

/// Satoshi as a BTC string with exactly 8 fractional digits.
inline std::string sat_to_btc(Sat sat) { return Decimal::from_parts(sat, kBtcDecimals).to_string(kBtcDecimals); }

/// Satoshi (possibly fractional, e.g. an even-length median) as BTC.
inline Decimal sat_to_btc_decimal(const Decimal& sat) {
  return Decimal::from_parts(sat.mantissa(), sat.scale() + kBtcDecimals);
}

/// Fiat value of `sat` at `rate` fiat units per BTC. Exact.
inline Decimal fiat_value(Sat sat, const Decimal& rate) { return sat_to_btc_decimal(Decimal(sat)) * rate; }

/// Satoshi needed to pay `fiat` at `rate`, rounded half-to-even.
inline Sat fiat_to_sat(const Decimal& fiat, const Decimal& rate) {
  if (!rate.is_positive()) throw Error(ErrorKind::domain, "exchange rate must be positive");
  return static_cast<Sat>(divide_round_half_even(fiat * Decimal(kSatPerBtc), rate));
}

}  // namespace remunscan
