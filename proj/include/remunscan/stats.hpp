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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <ranges>
#include <vector>

#include "remunscan/decimal.hpp"
#include "remunscan/error.hpp"

namespace remunscan {

namespace detail {

inline double as_double(const Decimal& d) { return d.to_double(); }

template <typename T>
  requires std::is_arithmetic_v<T>
double as_double(T v) {
  return static_cast<double>(v);
}

inline Decimal as_decimal(const Decimal& d) { return d; }

template <std::integral T>
Decimal as_decimal(T v) {
  return Decimal(static_cast<std::int64_t>(v));
}

}  // namespace detail

/// Exact median. Even-length input yields the mean of the two middle values.
template <std::ranges::input_range R>
Decimal median(const R& values) {
  std::vector<Decimal> sorted;
  for (const auto& v : values) sorted.push_back(detail::as_decimal(v));
  if (sorted.empty()) throw Error(ErrorKind::domain, "median of empty list");
  const auto mid = sorted.size() / 2;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid), sorted.end());
  const Decimal upper = sorted[mid];
  if (sorted.size() % 2 == 1) return upper;
  const Decimal lower = *std::max_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper).halved().normalized();
}

/// Population standard deviation over mean.
template <std::ranges::input_range R>
double coefficient_of_variation(const R& values) {
  std::vector<double> xs;
  for (const auto& v : values) xs.push_back(detail::as_double(v));
  if (xs.size() < 2) throw Error(ErrorKind::insufficient_data, "coefficient of variation needs at least 2 values");
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  if (!(mean > 0.0)) throw Error(ErrorKind::domain, "coefficient of variation needs a positive mean");
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / n) / mean;
}

}  // namespace remunscan
