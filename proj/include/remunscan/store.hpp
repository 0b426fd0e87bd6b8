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
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "remunscan/error.hpp"
#include "remunscan/ingest.hpp"
#include "remunscan/model.hpp"

namespace remunscan {

// Store layout:
//   DIR/sources/<name>.jsonl   transactions of one source, ordered by time
//   DIR/rates.csv              normalized exchange rates (optional)
//   DIR/stats.json             counters from the ingest run
// <name> is the address itself when alphanumeric, otherwise "_" + hex.

namespace fs = std::filesystem;

inline std::string store_file_name(const Address& addr) {
  const bool plain = std::all_of(addr.begin(), addr.end(), [](unsigned char c) { return std::isalnum(c) != 0; });
  if (plain) return addr + ".jsonl";
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "_";
  for (unsigned char c : addr) {
    out += kHex[c >> 4];
    out += kHex[c & 15];
  }
  return out + ".jsonl";
}

struct Store {
  std::vector<TxRecord> txs;
  std::optional<ExchangeRateSeries> rates;
};

inline void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

/// Replaces any previous store content under `dir`.
inline void write_store(const fs::path& dir, const std::vector<TxRecord>& txs,
                        const std::optional<ExchangeRateSeries>& rates) {
  std::error_code ec;
  fs::create_directories(dir / "sources", ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + (dir / "sources").string() + ": " + ec.message());
  for (const auto& entry : fs::directory_iterator(dir / "sources")) {
    if (entry.path().extension() == ".jsonl") fs::remove(entry.path());
  }
  fs::remove(dir / "rates.csv");

  std::map<Address, std::vector<const TxRecord*>> by_src;
  for (const auto& tx : txs) by_src[tx.src].push_back(&tx);
  for (auto& [src, list] : by_src) {
    std::stable_sort(list.begin(), list.end(), [](const TxRecord* a, const TxRecord* b) { return a->time < b->time; });
    std::string text;
    for (const TxRecord* tx : list) text += encode_tx_line(*tx) + "\n";
    write_text_file(dir / "sources" / store_file_name(src), text);
  }
  if (rates) {
    std::ostringstream csv;
    write_rates(csv, *rates);
    write_text_file(dir / "rates.csv", csv.str());
  }
}

inline Store load_store(const fs::path& dir) {
  if (!fs::is_directory(dir / "sources")) throw Error(ErrorKind::io, "not a store: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir / "sources")) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  TxIngestor ingestor(ParseMode::strict);
  for (const auto& f : files) ingestor.add_file(f.string());
  Store store;
  store.txs = ingestor.take_records();
  if (fs::exists(dir / "rates.csv")) store.rates = read_rates_file((dir / "rates.csv").string(), ParseMode::strict).series;
  return store;
}

inline nlohmann::ordered_json ingest_stats_to_json(const IngestStats& s) {
  nlohmann::ordered_json j;
  j["records_read"] = s.records_read;
  j["records_kept"] = s.records_kept;
  j["duplicates_dropped"] = s.duplicates_dropped;
  j["lines_rejected"] = s.lines_rejected;
  j["first_time"] = s.first_time;
  j["last_time"] = s.last_time;
  return j;
}

}  // namespace remunscan
