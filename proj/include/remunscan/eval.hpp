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
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "remunscan/detect.hpp"
#include "remunscan/error.hpp"
#include "remunscan/report.hpp"
#include "remunscan/synth.hpp"

namespace remunscan {

/// Source-level confusion matrix plus employee-set overlap per employer.
/// Ratios with a zero denominator are absent (null in JSON).
struct Metrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  /// 0 when either ratio is 0; otherwise absent when either ratio is absent.
  std::optional<double> f1;
  std::map<Address, double> recipient_jaccard;
};

inline double jaccard(const std::vector<Address>& a, const std::vector<Address>& b) {
  const std::set<Address> sa(a.begin(), a.end());
  const std::set<Address> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& x : sa) common += sb.count(x);
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

inline std::optional<double> f1_score(std::optional<double> p, std::optional<double> r) {
  if ((p && *p == 0.0) || (r && *r == 0.0)) return 0.0;
  if (!p || !r) return std::nullopt;
  return 2.0 * *p * *r / (*p + *r);
}

inline Metrics evaluate(const std::vector<ReportedSource>& report, const GroundTruth& truth) {
  std::map<Address, const ReportedSource*> by_src;
  for (const auto& r : report) by_src[r.src] = &r;
  std::map<Address, const SourceLabel*> labels;
  for (const auto& s : truth.sources) labels[s.addr] = &s;

  std::vector<Address> unmatched;
  for (const auto& [src, _] : by_src) {
    if (!labels.count(src)) unmatched.push_back(src + " (not labeled)");
  }
  for (const auto& [src, _] : labels) {
    if (!by_src.count(src)) unmatched.push_back(src + " (not in report)");
  }
  if (!unmatched.empty()) {
    std::string msg = "report and labels disagree on sources:";
    for (const auto& u : unmatched) msg += " " + u;
    throw Error(ErrorKind::input, msg);
  }

  Metrics m;
  for (const auto& [src, label] : labels) {
    const ReportedSource& r = *by_src.at(src);
    const bool actual = is_remunerating(label->role);
    if (r.remuneration && actual) ++m.tp;
    else if (r.remuneration) ++m.fp;
    else if (actual) ++m.fn;
    else ++m.tn;
    if (actual) m.recipient_jaccard[src] = jaccard(r.qualifying, label->employees);
  }
  if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  if (m.tp + m.fn > 0) m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  m.f1 = f1_score(m.precision, m.recall);
  return m;
}

inline Metrics evaluate(const DetectionReport& report, const GroundTruth& truth) {
  std::vector<ReportedSource> summary;
  for (const auto& e : report.entries) summary.push_back({e.src, e.remuneration, e.h1.qualifying});
  return evaluate(summary, truth);
}

inline nlohmann::ordered_json metrics_to_json(const Metrics& m) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  j["tn"] = m.tn;
  j["precision"] = opt(m.precision);
  j["recall"] = opt(m.recall);
  j["f1"] = opt(m.f1);
  j["recipient_jaccard"] = nlohmann::ordered_json::object();
  for (const auto& [src, v] : m.recipient_jaccard) j["recipient_jaccard"][src] = v;
  return j;
}

inline std::string headline(const Metrics& m) {
  auto fmt = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return std::string(buf);
  };
  return "P=" + fmt(m.precision) + " R=" + fmt(m.recall) + " F1=" + fmt(m.f1);
}

}  // namespace remunscan
