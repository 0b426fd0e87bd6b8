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

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "remunscan/config.hpp"
#include "remunscan/detect.hpp"
#include "remunscan/error.hpp"
#include "remunscan/eval.hpp"
#include "remunscan/ingest.hpp"
#include "remunscan/profile.hpp"
#include "remunscan/report.hpp"
#include "remunscan/store.hpp"
#include "remunscan/synth.hpp"

namespace remunscan::cli {

// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kIoError = 1;
inline constexpr int kUserError = 2;

inline constexpr const char* kConfigEnv = "REMUNSCAN_CONFIG";

/// Maps a library error to the command exit code.
inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::io:
    case ErrorKind::transport: return kIoError;
    default: return kUserError;
  }
}

/// Shortest round-trip form, always with a fractional part ("1.0").
inline std::string format_fraction(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

struct IngestOptions {
  std::vector<std::string> txs;
  std::optional<std::string> rates;
  std::string out;
  bool strict = false;
};

inline int cmd_ingest(const IngestOptions& opt, std::ostream& out, std::ostream& err) {
  const ParseMode mode = opt.strict ? ParseMode::strict : ParseMode::lenient;
  try {
    TxIngestor ingestor(mode);
    for (const auto& path : opt.txs) ingestor.add_file(path);
    for (const auto& r : ingestor.rejections()) err << "warning: " << r.source << ":" << r.line << ": " << r.reason << "\n";

    std::optional<ParsedRates> rates;
    if (opt.rates) {
      rates = read_rates_file(*opt.rates, mode);
      for (const auto& r : rates->rejections) {
        err << "warning: " << r.source << ":" << r.line << ": " << r.reason << "\n";
      }
    }
    const IngestStats stats = ingestor.stats();
    const std::vector<TxRecord>& txs = ingestor.records();
    write_store(opt.out, txs, rates ? std::optional(rates->series) : std::nullopt);

    auto doc = ingest_stats_to_json(stats);
    if (rates) {
      doc["rate_rows_read"] = rates->stats.rows_read;
      doc["rate_rows_rejected"] = rates->stats.rows_rejected;
      doc["rate_duplicate_dates"] = rates->stats.duplicate_dates;
    }
    write_text_file(std::filesystem::path(opt.out) / "stats.json", doc.dump(2) + "\n");

    std::set<Address> sources;
    for (const auto& tx : txs) sources.insert(tx.src);
    out << "ingest: read=" << stats.records_read << " kept=" << stats.records_kept
        << " duplicates=" << stats.duplicates_dropped << " rejected=" << stats.lines_rejected
        << " sources=" << sources.size() << "\n";
    return kOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectOptions {
  std::string store;
  std::optional<std::string> config;
  std::optional<std::string> window;
  std::string out;
  unsigned jobs = 1;
};

/// "FROM:TO" with both ends YYYY-MM-DD.
inline std::optional<DayWindow> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const auto from = parse_date(std::string_view(text).substr(0, colon));
  const auto to = parse_date(std::string_view(text).substr(colon + 1));
  if (!from || !to || *from > *to) return std::nullopt;
  return DayWindow{*from, *to};
}

inline int cmd_detect(const DetectOptions& opt, std::ostream& out, std::ostream& err) {
  std::optional<DayWindow> window;
  if (opt.window) {
    window = parse_window(*opt.window);
    if (!window) {
      err << "error: --window must be FROM:TO with dates YYYY-MM-DD and FROM <= TO\n";
      return kUserError;
    }
  }
  try {
    DetectConfig cfg;
    std::optional<std::string> config_path = opt.config;
    if (!config_path) {
      if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') config_path = env;
    }
    if (config_path) cfg = load_config_file(*config_path);

    const Store store = load_store(opt.store);
    const ProfileMap profiles = build_profiles(store.txs);
    const DetectionReport report =
        detect_all(profiles, store.rates ? &*store.rates : nullptr, cfg, window, opt.jobs);
    write_text_file(opt.out, report_to_string(report));

    std::size_t flagged = 0;
    for (const auto& e : report.entries) flagged += e.remuneration ? 1 : 0;
    out << "detect: sources=" << report.entries.size() << " remuneration=" << flagged << "\n";
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportOptions {
  std::string store;
  std::string source;
  std::string fig;
  std::optional<std::int64_t> bucket;
  std::string out;
};

inline constexpr std::int64_t kDefaultBucketDays = 30;

inline int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.fig != "daily-histogram" && opt.fig != "reuse" && opt.fig != "median-series") {
    err << "error: --fig must be daily-histogram, reuse or median-series\n";
    return kUserError;
  }
  try {
    const Store store = load_store(opt.store);
    const ProfileMap profiles = build_profiles(store.txs);
    auto it = profiles.find(opt.source);
    if (it == profiles.end()) {
      err << "error: unknown source " << opt.source << "\n";
      return kUserError;
    }
    const OutflowProfile& profile = it->second;
    std::ostringstream csv;
    std::size_t rows = 0;
    if (opt.fig == "daily-histogram") {
      csv << "day,recipients\n";
      for (const auto& dc : daily_recipient_histogram(profile, profile.first_day, profile.last_day)) {
        csv << format_date(dc.day) << ',' << dc.recipients << '\n';
        ++rows;
      }
    } else if (opt.fig == "reuse") {
      csv << "times_paid,fraction\n";
      for (const auto& [times, fraction] : reuse_distribution(profile)) {
        csv << times << ',' << format_fraction(fraction) << '\n';
        ++rows;
      }
    } else {
      csv << "bucket_start,median_btc\n";
      for (const auto& b : median_series(profile, opt.bucket.value_or(kDefaultBucketDays))) {
        csv << format_date(b.start_day) << ',' << sat_to_btc_decimal(b.median_sat).to_string(kBtcDecimals) << '\n';
        ++rows;
      }
    }
    write_text_file(opt.out, csv.str());
    out << "report: " << opt.fig << " rows=" << rows << "\n";
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

/// Reads typed fields from a params document and rejects unknown keys, naming
/// the offending field in every error.
class ParamReader {
 public:
  ParamReader(const nlohmann::json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw Error(ErrorKind::config, "field '" + label() + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!doc_.contains(key)) return;
    const auto& v = doc_[key];
    const std::string field = qualified(key);
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw Error(ErrorKind::config, "field '" + field + "' must be a number");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw Error(ErrorKind::config, "field '" + field + "' must be a non-negative integer");
      out = v.get<std::uint64_t>();
    } else {
      if (!v.is_number_integer()) throw Error(ErrorKind::config, "field '" + field + "' must be an integer");
      out = v.get<T>();
    }
  }

  void day(const char* key, Day& out) {
    seen_.insert(key);
    if (!doc_.contains(key)) return;
    const auto& v = doc_[key];
    auto d = v.is_string() ? parse_date(v.get<std::string>()) : std::nullopt;
    if (!d) throw Error(ErrorKind::config, "field '" + qualified(key) + "' must be a date YYYY-MM-DD");
    out = *d;
  }

  std::optional<std::string> string(const char* key) {
    seen_.insert(key);
    if (!doc_.contains(key)) return std::nullopt;
    if (!doc_[key].is_string()) throw Error(ErrorKind::config, "field '" + qualified(key) + "' must be a string");
    return doc_[key].get<std::string>();
  }

  std::optional<ParamReader> section(const char* key) {
    seen_.insert(key);
    if (!doc_.contains(key)) return std::nullopt;
    return ParamReader(doc_[key], qualified(key));
  }

  const nlohmann::json& raw(const char* key) {
    seen_.insert(key);
    return doc_[key];
  }

  bool has(const char* key) const { return doc_.contains(key); }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, _] : doc_.items()) {
      if (!seen_.count(key)) throw Error(ErrorKind::config, "unknown field '" + qualified(key) + "'");
    }
  }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  const nlohmann::json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

namespace detail {

inline void read_noise(ParamReader& r, NoiseParams& p) {
  r.get("n_txs", p.n_txs);
  r.get("rate_per_day", p.rate_per_day);
  r.get("mu", p.mu);
  r.get("sigma", p.sigma);
  r.get("fresh_fraction", p.fresh_fraction);
  r.get("pool_size", p.pool_size);
  r.day("start_day", p.start_day);
}

inline void read_payroll(ParamReader& r, PayrollParams& p, std::optional<ExchangeRateSeries>& rates,
                         const std::filesystem::path& base_dir) {
  r.get("n_employees", p.n_employees);
  r.get("period_days", p.period_days);
  r.get("jitter_days", p.jitter_days);
  r.get("n_periods", p.n_periods);
  r.day("start_day", p.start_day);
  if (auto reuse = r.string("reuse")) {
    if (*reuse == "stable") p.reuse = AddressReuse::stable;
    else if (*reuse == "fresh") p.reuse = AddressReuse::fresh;
    else throw Error(ErrorKind::config, "field '" + r.qualified("reuse") + "' must be stable or fresh");
  }
  if (auto salary = r.section("salary")) {
    const auto mode = salary->string("mode").value_or("fixed-btc");
    if (mode == "fixed-btc") {
      p.salary_mode = SalaryMode::fixed_btc;
      salary->get("sat", p.salary_sat);
    } else if (mode == "fixed-fiat") {
      p.salary_mode = SalaryMode::fixed_fiat;
      if (auto usd = salary->string("usd")) {
        try {
          p.salary_usd = Decimal::parse(*usd);
        } catch (const Error&) {
          throw Error(ErrorKind::config, "field '" + salary->qualified("usd") + "' must be a decimal string");
        }
      }
      auto file = salary->string("rates_file");
      if (!file) throw Error(ErrorKind::config, "field '" + salary->qualified("rates_file") + "' is required");
      std::filesystem::path path(*file);
      if (path.is_relative()) path = base_dir / path;
      rates = read_rates_file(path.string()).series;
    } else {
      throw Error(ErrorKind::config, "field '" + salary->qualified("mode") + "' must be fixed-btc or fixed-fiat");
    }
    salary->finish();
  }
}

}  // namespace detail

struct SynthOptions {
  std::string scenario;
  std::string params;
  std::uint64_t seed = 1;
  std::string out_txs;
  std::string out_labels;
};

/// Builds the corpus for one scenario document. `count` > 1 concatenates
/// independent scenarios seeded seed, seed+1, ...
inline Corpus synthesize(const std::string& scenario, const nlohmann::json& params, std::uint64_t seed,
                         const std::filesystem::path& base_dir = ".") {
  ParamReader root(params, "");
  std::int64_t count = 1;
  root.get("count", count);
  if (count < 1) throw Error(ErrorKind::config, "field 'count' must be >= 1");

  Corpus corpus;
  std::optional<ExchangeRateSeries> rates;
  if (scenario == "payroll") {
    PayrollParams p;
    detail::read_payroll(root, p, rates, base_dir);
    root.finish();
    for (std::int64_t i = 0; i < count; ++i) {
      p.seed = seed + static_cast<std::uint64_t>(i);
      corpus.merge(gen_payroll(p, rates ? &*rates : nullptr));
    }
  } else if (scenario == "noise") {
    NoiseParams p;
    detail::read_noise(root, p);
    root.finish();
    for (std::int64_t i = 0; i < count; ++i) {
      p.seed = seed + static_cast<std::uint64_t>(i);
      corpus.merge(gen_noise(p));
    }
  } else if (scenario == "lifecycle") {
    LifecycleParams p;
    root.get("noise_days", p.noise_days);
    root.get("quiet_days", p.quiet_days);
    root.day("start_day", p.start_day);
    if (auto noise = root.section("noise")) {
      detail::read_noise(*noise, p.noise);
      noise->finish();
    }
    if (auto payroll = root.section("payroll")) {
      detail::read_payroll(*payroll, p.payroll, rates, base_dir);
      payroll->finish();
    }
    root.finish();
    for (std::int64_t i = 0; i < count; ++i) {
      p.seed = seed + static_cast<std::uint64_t>(i);
      corpus.merge(gen_lifecycle(p, rates ? &*rates : nullptr));
    }
  } else if (scenario == "reuse") {
    ReuseParams p;
    root.day("start_day", p.start_day);
    if (root.has("plan")) {
      const auto& plan = root.raw("plan");
      if (!plan.is_object()) throw Error(ErrorKind::config, "field 'plan' must be an object");
      p.plan.clear();
      for (const auto& [key, value] : plan.items()) {
        std::int64_t times = 0;
        auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), times);
        if (ec != std::errc{} || ptr != key.data() + key.size() || !value.is_number_integer()) {
          throw Error(ErrorKind::config, "field 'plan." + key + "' must map an integer to an integer");
        }
        p.plan[times] = value.get<std::int64_t>();
      }
    }
    root.finish();
    for (std::int64_t i = 0; i < count; ++i) {
      p.seed = seed + static_cast<std::uint64_t>(i);
      corpus.merge(gen_reuse(p));
    }
  } else {
    throw Error(ErrorKind::input, "unknown scenario '" + scenario + "'");
  }
  return corpus;
}

inline int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.scenario != "payroll" && opt.scenario != "noise" && opt.scenario != "lifecycle" &&
        opt.scenario != "reuse") {
      throw Error(ErrorKind::input, "unknown scenario '" + opt.scenario + "'");
    }
    std::ifstream in(opt.params);
    if (!in) throw Error(ErrorKind::io, "cannot open params " + opt.params);
    nlohmann::json params;
    try {
      params = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::config, "params " + opt.params + ": " + e.what());
    }
    const Corpus corpus =
        synthesize(opt.scenario, params, opt.seed, std::filesystem::path(opt.params).parent_path());

    std::ostringstream txs;
    write_transactions(txs, corpus.txs);
    write_text_file(opt.out_txs, txs.str());
    nlohmann::ordered_json echo;
    echo["scenario"] = opt.scenario;
    echo["values"] = nlohmann::ordered_json::parse(params.dump());
    write_text_file(opt.out_labels, labels_to_json(corpus.truth, opt.seed, echo).dump(2) + "\n");
    out << "synth: scenario=" << opt.scenario << " sources=" << corpus.truth.sources.size()
        << " txs=" << corpus.txs.size() << "\n";
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string report;
  std::string labels;
  std::string out;
};

inline int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto report = read_report_file(opt.report);
    std::ifstream in(opt.labels);
    if (!in) throw Error(ErrorKind::io, "cannot open labels " + opt.labels);
    GroundTruth truth;
    try {
      truth = labels_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::input, "malformed labels " + opt.labels + ": " + e.what());
    }
    const Metrics m = evaluate(report, truth);
    write_text_file(opt.out, metrics_to_json(m).dump(2) + "\n");
    out << headline(m) << "\n";
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace remunscan::cli
