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

#include <chrono>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "remunscan/error.hpp"
#include "remunscan/model.hpp"

namespace remunscan {

// Block-explorer contract:
//   GET {endpoint}/address/{addr}/txs
//   -> [{"txid", "time", "inputs": [{"addr"}], "outputs": [{"addr", "value_sat"}]}]
// The first input address is the transaction's source.

/// Normalizes an explorer response for `addr`. When `addr` is the source all
/// positive outputs are kept; otherwise only outputs paying `addr`.
/// Transactions left with no outputs are dropped.
inline std::vector<TxRecord> decode_address_history(std::string_view body, const Address& addr) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw DecodeError("body", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) throw DecodeError("body", "expected a JSON array of transactions");

  std::vector<TxRecord> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string at = "[" + std::to_string(i) + "]";
    if (!item.is_object()) throw DecodeError(at, "expected an object");

    TxRecord tx;
    if (!item.contains("txid") || !item["txid"].is_string() || !is_txid(item["txid"].get<std::string>())) {
      throw DecodeError(at + ".txid", "expected 64 lowercase hex characters");
    }
    tx.txid = item["txid"].get<std::string>();
    if (!item.contains("time") || !item["time"].is_number_integer() || item["time"].get<std::int64_t>() < kGenesisTime) {
      throw DecodeError(at + ".time", "expected unix seconds at or after genesis");
    }
    tx.time = item["time"].get<std::int64_t>();

    if (!item.contains("inputs") || !item["inputs"].is_array() || item["inputs"].empty()) {
      throw DecodeError(at + ".inputs", "expected a non-empty array");
    }
    const auto& first_input = item["inputs"][0];
    if (!first_input.is_object() || !first_input.contains("addr") || !first_input["addr"].is_string() ||
        !is_address(first_input["addr"].get<std::string>())) {
      throw DecodeError(at + ".inputs[0].addr", "expected an address string");
    }
    tx.src = first_input["addr"].get<std::string>();

    if (!item.contains("outputs") || !item["outputs"].is_array()) {
      throw DecodeError(at + ".outputs", "expected an array");
    }
    const auto& outputs = item["outputs"];
    for (std::size_t j = 0; j < outputs.size(); ++j) {
      const auto& o = outputs[j];
      const std::string oat = at + ".outputs[" + std::to_string(j) + "]";
      if (!o.is_object()) throw DecodeError(oat, "expected an object");
      if (!o.contains("addr") || !o["addr"].is_string()) throw DecodeError(oat + ".addr", "expected a string");
      if (!o.contains("value_sat") || !o["value_sat"].is_number_integer() || o["value_sat"].get<std::int64_t>() < 0) {
        throw DecodeError(oat + ".value_sat", "expected a non-negative integer");
      }
      OutEntry entry{o["addr"].get<std::string>(), o["value_sat"].get<std::int64_t>()};
      // Zero-value outputs (data carriers) and unrelated outputs are not payments.
      if (entry.sat == 0 || !is_address(entry.addr)) continue;
      if (tx.src == addr || entry.addr == addr) tx.outs.push_back(std::move(entry));
    }
    if (tx.outs.empty() || !seen.insert(tx.txid).second) continue;
    out.push_back(std::move(tx));
  }
  return out;
}

struct ExplorerOptions {
  int max_attempts = 3;
  std::chrono::milliseconds backoff{250};
  std::chrono::milliseconds timeout{10'000};
};

/// HTTP client for one explorer endpoint. Requests through the same client
/// are serialized.
class ExplorerClient {
 public:
  explicit ExplorerClient(const std::string& endpoint, ExplorerOptions options = {})
      : options_(options) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorKind::input, "endpoint must include a scheme: " + endpoint);
    if (endpoint.compare(0, scheme_end, "http") != 0) {
      throw Error(ErrorKind::input, "only http:// endpoints are supported: " + endpoint);
    }
    const auto path_start = endpoint.find('/', scheme_end + 3);
    base_ = endpoint.substr(0, path_start);
    if (path_start != std::string::npos) prefix_ = endpoint.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }

  std::string path_for(const Address& addr) const { return prefix_ + "/address/" + addr + "/txs"; }

  std::vector<TxRecord> address_history(const Address& addr) {
    std::lock_guard<std::mutex> lock(mutex_);
    httplib::Client client(base_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    std::string last_failure = "no attempt made";
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
      auto res = client.Get(path_for(addr));
      if (res && res->status == 200) return decode_address_history(res->body, addr);
      if (res && res->status >= 400 && res->status < 500) {
        throw Error(ErrorKind::transport, "explorer returned HTTP " + std::to_string(res->status));
      }
      last_failure = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
      if (attempt < options_.max_attempts) std::this_thread::sleep_for(options_.backoff * attempt);
    }
    throw TransportError(options_.max_attempts, "explorer request failed: " + last_failure);
  }

 private:
  ExplorerOptions options_;
  std::string base_;
  std::string prefix_;
  std::mutex mutex_;
};

inline std::vector<TxRecord> fetch_address_history(const std::string& endpoint, const Address& addr,
                                                   ExplorerOptions options = {}) {
  ExplorerClient client(endpoint, options);
  return client.address_history(addr);
}

}  // namespace remunscan
