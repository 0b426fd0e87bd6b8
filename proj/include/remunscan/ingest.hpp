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
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "remunscan/calendar.hpp"
#include "remunscan/decimal.hpp"
#include "remunscan/error.hpp"
#include "remunscan/model.hpp"

namespace remunscan {

enum class ParseMode { lenient, strict };

struct IngestStats {
  std::size_t records_read = 0;
  std::size_t records_kept = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t lines_rejected = 0;
  /// Time bounds over kept records; zero when nothing was kept.
  UnixTime first_time = 0;
  UnixTime last_time = 0;

  bool reconciles() const noexcept { return records_kept + duplicates_dropped + lines_rejected == records_read; }
};

struct Rejection {
  std::string source;
  std::size_t line = 0;
  std::string reason;
};

namespace detail {

inline void trim_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

inline Sat json_positive_int(const nlohmann::json& v, const char* what) {
  if (!v.is_number_integer()) throw std::invalid_argument(std::string(what) + " must be an integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) throw std::invalid_argument(std::string(what) + " out of range");
    return static_cast<Sat>(u);
  }
  return v.get<std::int64_t>();
}

}  // namespace detail

/// Decodes one transactions.jsonl line. Throws std::invalid_argument with the
/// rejection reason; the caller attaches the line number.
inline TxRecord decode_tx_line(std::string_view line, ParseMode mode) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    throw std::invalid_argument("not valid JSON");
  }
  if (!doc.is_object()) throw std::invalid_argument("record must be a JSON object");
  if (mode == ParseMode::strict) {
    for (const auto& [key, _] : doc.items()) {
      if (key != "txid" && key != "time" && key != "src" && key != "outs") {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    }
  }
  for (const char* key : {"txid", "time", "src", "outs"}) {
    if (!doc.contains(key)) throw std::invalid_argument(std::string("missing key '") + key + "'");
  }
  TxRecord tx;
  if (!doc["txid"].is_string()) throw std::invalid_argument("txid must be a string");
  tx.txid = doc["txid"].get<std::string>();
  tx.time = detail::json_positive_int(doc["time"], "time");
  if (!doc["src"].is_string()) throw std::invalid_argument("src must be a string");
  tx.src = doc["src"].get<std::string>();
  if (!doc["outs"].is_array()) throw std::invalid_argument("outs must be an array");
  for (const auto& out : doc["outs"]) {
    if (!out.is_object()) throw std::invalid_argument("output must be an object");
    if (mode == ParseMode::strict) {
      for (const auto& [key, _] : out.items()) {
        if (key != "addr" && key != "sat") throw std::invalid_argument("unknown output key '" + key + "'");
      }
    }
    if (!out.contains("addr") || !out["addr"].is_string()) throw std::invalid_argument("output addr must be a string");
    if (!out.contains("sat")) throw std::invalid_argument("missing key 'sat'");
    tx.outs.push_back({out["addr"].get<std::string>(), detail::json_positive_int(out["sat"], "sat")});
  }
  if (auto bad = check_tx(tx)) throw std::invalid_argument(*bad);
  return tx;
}

/// Canonical transactions.jsonl line (no trailing newline).
inline std::string encode_tx_line(const TxRecord& tx) {
  nlohmann::ordered_json doc;
  doc["txid"] = tx.txid;
  doc["time"] = tx.time;
  doc["src"] = tx.src;
  auto outs = nlohmann::ordered_json::array();
  for (const auto& out : tx.outs) {
    nlohmann::ordered_json o;
    o["addr"] = out.addr;
    o["sat"] = out.sat;
    outs.push_back(std::move(o));
  }
  doc["outs"] = std::move(outs);
  return doc.dump();
}

/// Accumulates transaction records from one or more line streams, dropping
/// repeated txids (first occurrence wins) across all of them.
class TxIngestor {
 public:
  explicit TxIngestor(ParseMode mode = ParseMode::lenient) : mode_(mode) {}

  void add(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      detail::trim_cr(line);
      if (detail::is_blank(line)) continue;
      ++stats_.records_read;
      TxRecord tx;
      try {
        tx = decode_tx_line(line, mode_);
      } catch (const std::invalid_argument& e) {
        ++stats_.lines_rejected;
        rejections_.push_back({source, lineno, e.what()});
        if (mode_ == ParseMode::strict) throw ParseError(source, lineno, e.what());
        continue;
      }
      if (!seen_.insert(tx.txid).second) {
        ++stats_.duplicates_dropped;
        continue;
      }
      if (stats_.records_kept == 0 || tx.time < stats_.first_time) stats_.first_time = tx.time;
      if (stats_.records_kept == 0 || tx.time > stats_.last_time) stats_.last_time = tx.time;
      ++stats_.records_kept;
      records_.push_back(std::move(tx));
    }
    if (in.bad()) throw Error(ErrorKind::io, "read failure in " + source);
  }

  void add_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    add(in, path);
  }

  const std::vector<TxRecord>& records() const noexcept { return records_; }
  std::vector<TxRecord> take_records() { return std::move(records_); }
  const IngestStats& stats() const noexcept { return stats_; }
  const std::vector<Rejection>& rejections() const noexcept { return rejections_; }

 private:
  ParseMode mode_;
  std::vector<TxRecord> records_;
  std::unordered_set<std::string> seen_;
  IngestStats stats_;
  std::vector<Rejection> rejections_;
};

struct ParsedTransactions {
  std::vector<TxRecord> records;
  IngestStats stats;
  std::vector<Rejection> rejections;
};

inline ParsedTransactions parse_transactions(std::istream& in, ParseMode mode = ParseMode::lenient,
                                             const std::string& source = "<stream>") {
  TxIngestor ingestor(mode);
  ingestor.add(in, source);
  ParsedTransactions out;
  out.stats = ingestor.stats();
  out.rejections = ingestor.rejections();
  out.records = ingestor.take_records();
  return out;
}

inline void write_transactions(std::ostream& out, const std::vector<TxRecord>& txs) {
  for (const auto& tx : txs) out << encode_tx_line(tx) << '\n';
}

inline constexpr std::string_view kRatesHeader = "date,usd_per_btc";

struct RateStats {
  std::size_t rows_read = 0;
  std::size_t rows_rejected = 0;
  std::size_t duplicate_dates = 0;
};

struct ParsedRates {
  ExchangeRateSeries series;
  RateStats stats;
  std::vector<Rejection> rejections;
};

/// Reads rates.csv. Rows may arrive in any order; a repeated date keeps the
/// last row seen and bumps `duplicate_dates`.
inline ParsedRates parse_rates(std::istream& in, ParseMode mode = ParseMode::lenient,
                               const std::string& source = "<rates>") {
  ParsedRates out;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  ++lineno;
  detail::trim_cr(line);
  if (line != kRatesHeader) throw ParseError(source, 1, "header must be exactly '" + std::string(kRatesHeader) + "'");

  std::map<Day, Decimal> by_date;
  auto reject = [&](const std::string& reason) {
    ++out.stats.rows_rejected;
    out.rejections.push_back({source, lineno, reason});
    if (mode == ParseMode::strict) throw ParseError(source, lineno, reason);
  };
  while (std::getline(in, line)) {
    ++lineno;
    detail::trim_cr(line);
    if (detail::is_blank(line)) continue;
    ++out.stats.rows_read;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      reject("expected exactly two columns");
      continue;
    }
    const auto date = parse_date(std::string_view(line).substr(0, comma));
    if (!date) {
      reject("unparseable date");
      continue;
    }
    Decimal rate;
    try {
      rate = Decimal::parse(std::string_view(line).substr(comma + 1));
    } catch (const Error&) {
      reject("unparseable rate");
      continue;
    }
    if (!rate.is_positive()) {
      reject("rate must be positive");
      continue;
    }
    if (by_date.count(*date)) ++out.stats.duplicate_dates;
    by_date[*date] = rate;
  }
  if (in.bad()) throw Error(ErrorKind::io, "read failure in " + source);
  if (by_date.empty()) throw Error(ErrorKind::input, source + ": no valid exchange-rate rows");
  std::vector<RateEntry> entries;
  entries.reserve(by_date.size());
  for (const auto& [day, rate] : by_date) entries.push_back({day, rate});
  out.series = ExchangeRateSeries(std::move(entries));
  return out;
}

inline ParsedRates read_rates_file(const std::string& path, ParseMode mode = ParseMode::lenient) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return parse_rates(in, mode, path);
}

inline void write_rates(std::ostream& out, const ExchangeRateSeries& series) {
  out << kRatesHeader << '\n';
  for (const auto& e : series.entries()) out << format_date(e.date) << ',' << e.usd_per_btc.to_string() << '\n';
}

}  // namespace remunscan
