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
#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "remunscan/calendar.hpp"
#include "remunscan/decimal.hpp"
#include "remunscan/error.hpp"
#include "remunscan/model.hpp"
#include "remunscan/money.hpp"
#include "remunscan/profile.hpp"
#include "remunscan/stats.hpp"

namespace remunscan {

enum class PeriodicityStatus { ok, insufficient_data, degenerate };

inline const char* to_string(PeriodicityStatus s) noexcept {
  switch (s) {
    case PeriodicityStatus::ok: return "ok";
    case PeriodicityStatus::insufficient_data: return "insufficient-data";
    case PeriodicityStatus::degenerate: return "degenerate";
  }
  return "unknown";
}

struct Periodicity {
  PeriodicityStatus status = PeriodicityStatus::insufficient_data;
  double median_interval_days = 0.0;
  /// Absent unless status is ok.
  std::optional<double> interval_cv;
};

/// Median and CV of a stream's day gaps. Streams shorter than `min_payments`
/// report insufficient data; streams whose gaps are all zero report
/// degenerate periodicity.
inline Periodicity stream_periodicity(const PaymentStream& stream, std::size_t min_payments) {
  Periodicity out;
  if (stream.size() < min_payments || stream.size() < 2) return out;
  const auto gaps = interarrival_days(stream);
  out.median_interval_days = median(gaps).to_double();
  if (std::all_of(gaps.begin(), gaps.end(), [](std::int64_t g) { return g == 0; })) {
    out.status = PeriodicityStatus::degenerate;
    return out;
  }
  out.status = PeriodicityStatus::ok;
  out.interval_cv = coefficient_of_variation(gaps);
  return out;
}

struct AmountBand {
  Decimal band_median_sat;
  std::size_t inband = 0;
  std::size_t total = 0;
  double inband_fraction = 0.0;
};

/// Share of payments inside the closed band [m(1-rho), m(1+rho)] around the
/// stream median m. Band edges are evaluated exactly; `rho` is taken to 12
/// decimal places.
inline AmountBand stream_amount_band(const PaymentStream& stream, double rho) {
  if (stream.empty()) throw Error(ErrorKind::domain, "amount band of an empty stream");
  AmountBand out;
  out.band_median_sat = median(stream.amounts());
  const Decimal r = Decimal::from_double(rho, 12);
  const Decimal lower = out.band_median_sat * (Decimal(1) - r);
  const Decimal upper = out.band_median_sat * (Decimal(1) + r);
  for (const auto& p : stream.payments) {
    const Decimal v(p.sat);
    if (v >= lower && v <= upper) ++out.inband;
  }
  out.total = stream.size();
  out.inband_fraction = static_cast<double>(out.inband) / static_cast<double>(out.total);
  return out;
}

struct StreamScore {
  std::size_t payments = 0;
  Periodicity periodicity;
  AmountBand band;
  /// Payment count and interval conditions hold.
  bool periodic = false;
  /// `periodic` and the amount-band condition holds.
  bool qualifies = false;
};

struct Heuristic1Verdict {
  bool pass = false;
  std::vector<Address> qualifying;
  /// Scores for every recipient paid inside the window.
  std::map<Address, StreamScore> streams;

  std::size_t periodic_count() const {
    return static_cast<std::size_t>(
        std::count_if(streams.begin(), streams.end(), [](const auto& kv) { return kv.second.periodic; }));
  }
};

inline StreamScore score_stream(const PaymentStream& stream, const Heuristic1Config& cfg) {
  StreamScore s;
  s.payments = stream.size();
  s.periodicity = stream_periodicity(stream, cfg.min_payments_per_stream);
  s.band = stream_amount_band(stream, cfg.rho);
  s.periodic = s.payments >= cfg.min_payments_per_stream && s.periodicity.status == PeriodicityStatus::ok &&
               s.periodicity.median_interval_days >= cfg.min_interval_days &&
               s.periodicity.median_interval_days <= cfg.max_interval_days &&
               *s.periodicity.interval_cv <= cfg.max_interval_cv;
  s.qualifies = s.periodic && s.band.inband_fraction >= cfg.min_inband_fraction;
  return s;
}

/// Remuneration-profile test over the payments that fall in `window`.
inline Heuristic1Verdict detect_remuneration(const OutflowProfile& profile, const Heuristic1Config& cfg,
                                             DayWindow window) {
  if (window.from > window.to) throw Error(ErrorKind::domain, "detection window is inverted");
  Heuristic1Verdict verdict;
  for (const auto& [rcpt, stream] : profile.streams) {
    const PaymentStream in_window = stream.within(window.from, window.to);
    if (in_window.empty()) continue;
    StreamScore score = score_stream(in_window, cfg);
    if (score.qualifies) verdict.qualifying.push_back(rcpt);
    verdict.streams.emplace(rcpt, std::move(score));
  }
  verdict.pass = verdict.qualifying.size() >= cfg.min_qualifying_streams;
  return verdict;
}

inline DayWindow lifetime(const OutflowProfile& profile) { return {profile.first_day, profile.last_day}; }

inline Heuristic1Verdict detect_remuneration(const OutflowProfile& profile, const Heuristic1Config& cfg) {
  return detect_remuneration(profile, cfg, lifetime(profile));
}

struct FiatPoint {
  UnixTime time = 0;
  Sat sat = 0;
  Decimal value;
};

struct FiatSeries {
  std::vector<FiatPoint> points;
  /// Payments dated before the first available rate.
  std::size_t skipped = 0;
};

enum class CoveragePolicy { skip, require };

/// Fiat value of every payment at its day's forward-filled rate.
inline FiatSeries fiat_series(const PaymentStream& stream, const ExchangeRateSeries& rates,
                              CoveragePolicy policy = CoveragePolicy::skip) {
  FiatSeries out;
  for (const auto& p : stream.payments) {
    const auto rate = rates.find(p.day());
    if (!rate) {
      if (policy == CoveragePolicy::require) {
        throw Error(ErrorKind::no_coverage, "no exchange rate for payment on " + format_date(p.day()));
      }
      ++out.skipped;
      continue;
    }
    out.points.push_back({p.time, p.sat, fiat_value(p.sat, *rate)});
  }
  return out;
}

/// Share of uncovered payments above which a benchmark verdict is partial.
inline constexpr double kPartialCoverageThreshold = 0.10;

enum class BenchmarkStatus { ok, insufficient_data };

inline const char* to_string(BenchmarkStatus s) noexcept {
  return s == BenchmarkStatus::ok ? "ok" : "insufficient-data";
}

struct Heuristic2Verdict {
  BenchmarkStatus status = BenchmarkStatus::insufficient_data;
  bool flagged = false;
  bool partial = false;
  std::size_t covered = 0;
  std::size_t skipped = 0;
  std::optional<double> cv_fiat;
  std::optional<double> cv_btc;
  /// Median fiat value of the covered payments: the inferred target.
  std::optional<Decimal> median_fiat;
};

/// Benchmark-target test: fiat values stable in absolute terms and clearly
/// more stable than the BTC amounts that produced them.
inline Heuristic2Verdict detect_benchmark(const PaymentStream& stream, const ExchangeRateSeries& rates,
                                          const Heuristic2Config& cfg) {
  Heuristic2Verdict v;
  const FiatSeries fiat = fiat_series(stream, rates, CoveragePolicy::skip);
  v.covered = fiat.points.size();
  v.skipped = fiat.skipped;
  v.partial = static_cast<double>(v.skipped) > kPartialCoverageThreshold * static_cast<double>(stream.size());
  if (v.covered < cfg.min_payments) return v;

  std::vector<Sat> sats;
  std::vector<Decimal> values;
  for (const auto& pt : fiat.points) {
    sats.push_back(pt.sat);
    values.push_back(pt.value);
  }
  v.status = BenchmarkStatus::ok;
  v.cv_btc = coefficient_of_variation(sats);
  v.cv_fiat = coefficient_of_variation(values);
  v.median_fiat = median(values);
  v.flagged = *v.cv_fiat <= cfg.theta_abs && *v.cv_fiat < cfg.theta_rel * *v.cv_btc;
  return v;
}

/// Labels fixed-width blocks of the lifetime and merges equal neighbours.
inline std::vector<PhaseSegment> segment_phases(const OutflowProfile& profile, const PhaseConfig& phase,
                                                const Heuristic1Config& h1) {
  if (profile.streams.empty()) throw Error(ErrorKind::domain, "phase segmentation of an empty profile");
  std::vector<PhaseSegment> out;
  for (Day start = profile.first_day; start <= profile.last_day; start += phase.window_days) {
    const Day end = std::min(start + phase.window_days - 1, profile.last_day);
    PhaseLabel label;
    auto active = profile.daily_outdegree.lower_bound(start);
    if (active == profile.daily_outdegree.end() || active->first > end) {
      label = PhaseLabel::quiescent;
    } else {
      label = detect_remuneration(profile, h1, {start, end}).pass ? PhaseLabel::structured : PhaseLabel::unstructured;
    }
    if (!out.empty() && out.back().label == label) {
      out.back().end_day = end;
    } else {
      out.push_back({start, end, label});
    }
  }
  return out;
}

/// Full per-source result.
struct DetectionEntry {
  Address src;
  bool remuneration = false;
  std::string rationale;
  Heuristic1Verdict h1;
  /// Evaluated only when an exchange-rate series is available.
  bool h2_evaluated = false;
  std::map<Address, Heuristic2Verdict> h2;
  std::vector<PhaseSegment> phases;
  std::map<std::size_t, double> reuse;
};

/// Joins both heuristics. A source is remunerating when the remuneration
/// profile passes, or when enough streams are periodic (amount band waived)
/// and those same streams track a fiat target.
inline DetectionEntry combined_verdict(const OutflowProfile& profile, const ExchangeRateSeries* rates,
                                       const DetectConfig& cfg, DayWindow window) {
  DetectionEntry e;
  e.src = profile.src;
  e.h1 = detect_remuneration(profile, cfg.h1, window);
  std::size_t rescued = 0;
  if (rates != nullptr && !rates->empty()) {
    e.h2_evaluated = true;
    for (const auto& [rcpt, score] : e.h1.streams) {
      const PaymentStream in_window = profile.streams.at(rcpt).within(window.from, window.to);
      auto v = detect_benchmark(in_window, *rates, cfg.h2);
      if (score.periodic && v.flagged) ++rescued;
      e.h2.emplace(rcpt, std::move(v));
    }
  }
  const std::string need = std::to_string(cfg.h1.min_qualifying_streams);
  if (e.h1.pass) {
    e.remuneration = true;
    e.rationale = "remuneration profile: " + std::to_string(e.h1.qualifying.size()) + " qualifying streams (need " +
                  need + ")";
  } else if (e.h2_evaluated && rescued >= cfg.h1.min_qualifying_streams) {
    e.remuneration = true;
    e.rationale = "benchmark target: " + std::to_string(rescued) +
                  " periodic streams track a fiat value with the amount band waived (need " + need + ")";
  } else {
    e.rationale = "no remuneration: " + std::to_string(e.h1.qualifying.size()) + " qualifying streams (need " + need +
                  ")";
    e.rationale += e.h2_evaluated ? ", " + std::to_string(rescued) + " periodic fiat-tracking streams"
                                  : ", no exchange rates for the benchmark test";
  }
  e.phases = segment_phases(profile, cfg.phase, cfg.h1);
  e.reuse = reuse_distribution(profile);
  return e;
}

struct DetectionReport {
  DetectConfig config;
  std::optional<DayWindow> window;
  std::vector<DetectionEntry> entries;
};

/// Runs combined_verdict for every profile on `jobs` threads. Entries are
/// ordered by source address regardless of `jobs`.
inline DetectionReport detect_all(const ProfileMap& profiles, const ExchangeRateSeries* rates, const DetectConfig& cfg,
                                  std::optional<DayWindow> window = std::nullopt, unsigned jobs = 1) {
  cfg.validate();
  if (window && window->from > window->to) throw Error(ErrorKind::domain, "detection window is inverted");
  DetectionReport report;
  report.config = cfg;
  report.window = window;
  std::vector<const OutflowProfile*> work;
  for (const auto& [src, profile] : profiles) work.push_back(&profile);
  report.entries.resize(work.size());

  auto run = [&](std::size_t i) {
    const OutflowProfile& p = *work[i];
    report.entries[i] = combined_verdict(p, rates, cfg, window.value_or(lifetime(p)));
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < work.size(); ++i) run(i);
    return report;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < work.size(); i = next++) run(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return report;
}

}  // namespace remunscan
