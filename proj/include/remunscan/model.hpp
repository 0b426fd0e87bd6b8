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
#include <cstddef>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "remunscan/calendar.hpp"
#include "remunscan/decimal.hpp"
#include "remunscan/error.hpp"
#include "remunscan/money.hpp"

namespace remunscan {

using Address = std::string;

inline constexpr std::size_t kMaxAddressLength = 90;

struct OutEntry {
  Address addr;
  Sat sat = 0;

  friend bool operator==(const OutEntry&, const OutEntry&) = default;
};

/// One on-chain transaction reduced to a single logical source.
struct TxRecord {
  std::string txid;
  UnixTime time = 0;
  Address src;
  std::vector<OutEntry> outs;

  friend bool operator==(const TxRecord&, const TxRecord&) = default;
};

inline bool is_txid(const std::string& s) {
  return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

inline bool is_address(const std::string& s) { return !s.empty() && s.size() <= kMaxAddressLength; }

/// Reason the record violates a TxRecord invariant, or nullopt when valid.
inline std::optional<std::string> check_tx(const TxRecord& tx) {
  if (!is_txid(tx.txid)) return "txid must be 64 lowercase hex characters";
  if (tx.time < kGenesisTime) return "time precedes the genesis block";
  if (!is_address(tx.src)) return "src must be 1-90 characters";
  if (tx.outs.empty()) return "outs must be non-empty";
  for (const auto& out : tx.outs) {
    if (!is_address(out.addr)) return "output addr must be 1-90 characters";
    if (out.sat < 1) return "output sat must be positive";
  }
  return std::nullopt;
}

struct Payment {
  UnixTime time = 0;
  Sat sat = 0;
  /// Ingest position of the carrying transaction; breaks ties on equal time.
  std::size_t seq = 0;

  Day day() const noexcept { return day_of(time); }
  friend bool operator==(const Payment&, const Payment&) = default;
};

/// Time-ordered payments from one source to one recipient.
struct PaymentStream {
  Address src;
  Address rcpt;
  std::vector<Payment> payments;

  std::size_t size() const noexcept { return payments.size(); }
  bool empty() const noexcept { return payments.empty(); }

  std::vector<Sat> amounts() const {
    std::vector<Sat> out;
    out.reserve(payments.size());
    for (const auto& p : payments) out.push_back(p.sat);
    return out;
  }

  /// Payments whose UTC day lies in [from, to].
  PaymentStream within(Day from, Day to) const {
    PaymentStream out{src, rcpt, {}};
    for (const auto& p : payments) {
      if (p.day() >= from && p.day() <= to) out.payments.push_back(p);
    }
    return out;
  }
};

/// Everything observed about one paying address.
struct OutflowProfile {
  Address src;
  std::map<Address, PaymentStream> streams;
  Day first_day = 0;
  Day last_day = 0;
  /// Distinct recipients paid on each active day.
  std::map<Day, std::size_t> daily_outdegree;
  std::size_t total_outputs = 0;
  Sat total_sat = 0;
};

struct RateEntry {
  Day date = 0;
  Decimal usd_per_btc;
};

/// USD-per-BTC rates with forward-fill lookup.
class ExchangeRateSeries {
 public:
  ExchangeRateSeries() = default;

  explicit ExchangeRateSeries(std::vector<RateEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (!entries_[i].usd_per_btc.is_positive()) throw Error(ErrorKind::domain, "exchange rate must be positive");
      if (i > 0 && entries_[i].date <= entries_[i - 1].date) {
        throw Error(ErrorKind::domain, "exchange rate dates must be strictly increasing");
      }
    }
  }

  const std::vector<RateEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Rate of the latest entry dated on or before `day`, or nullopt.
  std::optional<Decimal> find(Day day) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), day,
                               [](Day d, const RateEntry& e) { return d < e.date; });
    if (it == entries_.begin()) return std::nullopt;
    return std::prev(it)->usd_per_btc;
  }

 private:
  std::vector<RateEntry> entries_;
};

/// Forward-filled rate for `day`. Throws no-coverage before the first entry.
inline Decimal rate_at(const ExchangeRateSeries& series, Day day) {
  if (series.empty()) throw Error(ErrorKind::no_coverage, "exchange rate series is empty");
  auto rate = series.find(day);
  if (!rate) throw Error(ErrorKind::no_coverage, "no exchange rate on or before " + format_date(day));
  return *rate;
}

/// Thresholds for the remuneration-profile heuristic.
struct Heuristic1Config {
  /// Half-width of the amount band as a fraction of the stream median.
  double rho = 0.5;
  double min_interval_days = 1.0;
  double max_interval_days = 45.0;
  double max_interval_cv = 0.4;
  double min_inband_fraction = 0.6;
  std::size_t min_payments_per_stream = 4;
  std::size_t min_qualifying_streams = 5;

  void validate() const {
    if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::config, "h1.rho must lie in (0, 1)");
    if (!(min_interval_days > 0.0)) throw Error(ErrorKind::config, "h1.min_interval_days must be positive");
    if (!(min_interval_days <= max_interval_days)) {
      throw Error(ErrorKind::config, "h1.min_interval_days must not exceed h1.max_interval_days");
    }
    if (!(max_interval_cv > 0.0)) throw Error(ErrorKind::config, "h1.max_interval_cv must be positive");
    if (!(min_inband_fraction > 0.0 && min_inband_fraction <= 1.0)) {
      throw Error(ErrorKind::config, "h1.min_inband_fraction must lie in (0, 1]");
    }
    if (min_payments_per_stream < 2) throw Error(ErrorKind::config, "h1.min_payments_per_stream must be >= 2");
    if (min_qualifying_streams < 1) throw Error(ErrorKind::config, "h1.min_qualifying_streams must be >= 1");
  }
};

/// Thresholds for the benchmark-target heuristic.
struct Heuristic2Config {
  double theta_abs = 0.3;
  double theta_rel = 0.75;
  std::size_t min_payments = 4;

  void validate() const {
    if (!(theta_abs > 0.0)) throw Error(ErrorKind::config, "h2.theta_abs must be positive");
    if (!(theta_rel > 0.0 && theta_rel < 1.0)) throw Error(ErrorKind::config, "h2.theta_rel must lie in (0, 1)");
    if (min_payments < 2) throw Error(ErrorKind::config, "h2.min_payments must be >= 2");
  }
};

struct PhaseConfig {
  std::int64_t window_days = 30;

  void validate() const {
    if (window_days < 1) throw Error(ErrorKind::config, "phase.window_days must be >= 1");
  }
};

struct DetectConfig {
  Heuristic1Config h1;
  Heuristic2Config h2;
  PhaseConfig phase;

  void validate() const {
    h1.validate();
    h2.validate();
    phase.validate();
  }
};

enum class PhaseLabel { quiescent, unstructured, structured };

inline const char* to_string(PhaseLabel label) noexcept {
  switch (label) {
    case PhaseLabel::quiescent: return "quiescent";
    case PhaseLabel::unstructured: return "unstructured";
    case PhaseLabel::structured: return "structured";
  }
  return "unknown";
}

inline std::optional<PhaseLabel> parse_phase_label(std::string_view s) {
  if (s == "quiescent") return PhaseLabel::quiescent;
  if (s == "unstructured") return PhaseLabel::unstructured;
  if (s == "structured") return PhaseLabel::structured;
  return std::nullopt;
}

/// Inclusive day range with one behavioural label.
struct PhaseSegment {
  Day start_day = 0;
  Day end_day = 0;
  PhaseLabel label = PhaseLabel::unstructured;

  friend bool operator==(const PhaseSegment&, const PhaseSegment&) = default;
};

struct DayWindow {
  Day from = 0;
  Day to = 0;
};

}  // namespace remunscan
