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

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "remunscan/config.hpp"
#include "remunscan/detect.hpp"
#include "remunscan/error.hpp"

namespace remunscan {

namespace detail {

template <typename T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

inline nlohmann::ordered_json entry_to_json(const DetectionEntry& e) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["src"] = e.src;
  j["remuneration"] = e.remuneration;
  j["rationale"] = e.rationale;

  ordered_json h1;
  h1["pass"] = e.h1.pass;
  h1["qualifying"] = e.h1.qualifying;
  auto streams = ordered_json::array();
  for (const auto& [rcpt, s] : e.h1.streams) {
    ordered_json o;
    o["rcpt"] = rcpt;
    o["payments"] = s.payments;
    o["periodicity"] = to_string(s.periodicity.status);
    o["median_interval_days"] = s.periodicity.median_interval_days;
    o["interval_cv"] = detail::optional_json(s.periodicity.interval_cv);
    o["band_median_sat"] = s.band.band_median_sat.to_string();
    o["inband"] = s.band.inband;
    o["inband_fraction"] = s.band.inband_fraction;
    o["periodic"] = s.periodic;
    o["qualifies"] = s.qualifies;
    streams.push_back(std::move(o));
  }
  h1["streams"] = std::move(streams);
  j["h1_verdict"] = std::move(h1);

  if (e.h2_evaluated) {
    auto flags = ordered_json::array();
    for (const auto& [rcpt, v] : e.h2) {
      ordered_json o;
      o["rcpt"] = rcpt;
      o["status"] = to_string(v.status);
      o["flagged"] = v.flagged;
      o["partial"] = v.partial;
      o["covered"] = v.covered;
      o["skipped"] = v.skipped;
      o["cv_fiat"] = detail::optional_json(v.cv_fiat);
      o["cv_btc"] = detail::optional_json(v.cv_btc);
      o["median_fiat"] = v.median_fiat ? ordered_json(v.median_fiat->to_string(2)) : ordered_json(nullptr);
      flags.push_back(std::move(o));
    }
    j["h2_flags"] = std::move(flags);
  } else {
    j["h2_flags"] = nullptr;
  }

  auto phases = ordered_json::array();
  for (const auto& p : e.phases) {
    phases.push_back({{"start_day", format_date(p.start_day)}, {"end_day", format_date(p.end_day)},
                      {"label", to_string(p.label)}});
  }
  j["phases"] = std::move(phases);
  ordered_json reuse = ordered_json::object();
  for (const auto& [times, fraction] : e.reuse) reuse[std::to_string(times)] = fraction;
  j["reuse"] = std::move(reuse);
  return j;
}

inline nlohmann::ordered_json report_to_json(const DetectionReport& report) {
  nlohmann::ordered_json j;
  j["config"] = config_to_json(report.config);
  if (report.window) {
    j["window"] = {{"from", format_date(report.window->from)}, {"to", format_date(report.window->to)}};
  } else {
    j["window"] = nullptr;
  }
  auto sources = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) sources.push_back(entry_to_json(e));
  j["sources"] = std::move(sources);
  return j;
}

inline std::string report_to_string(const DetectionReport& report) { return report_to_json(report).dump(2) + "\n"; }

/// The parts of a report that evaluation consumes.
struct ReportedSource {
  Address src;
  bool remuneration = false;
  std::vector<Address> qualifying;
};

inline std::vector<ReportedSource> read_report_summary(const nlohmann::json& doc) {
  auto bad = [](const std::string& what) { return Error(ErrorKind::input, "malformed report: " + what); };
  if (!doc.is_object() || !doc.contains("sources") || !doc["sources"].is_array()) throw bad("missing sources array");
  std::vector<ReportedSource> out;
  for (const auto& s : doc["sources"]) {
    if (!s.is_object() || !s.contains("src") || !s["src"].is_string()) throw bad("source without src");
    if (!s.contains("remuneration") || !s["remuneration"].is_boolean()) throw bad("source without remuneration flag");
    ReportedSource r;
    r.src = s["src"].get<std::string>();
    r.remuneration = s["remuneration"].get<bool>();
    if (s.contains("h1_verdict") && s["h1_verdict"].is_object() && s["h1_verdict"].contains("qualifying")) {
      const auto& q = s["h1_verdict"]["qualifying"];
      if (!q.is_array()) throw bad("qualifying must be an array");
      for (const auto& a : q) {
        if (!a.is_string()) throw bad("qualifying entries must be strings");
        r.qualifying.push_back(a.get<std::string>());
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<ReportedSource> read_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open report " + path);
  try {
    return read_report_summary(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::input, "malformed report " + path + ": " + e.what());
  }
}

}  // namespace remunscan
