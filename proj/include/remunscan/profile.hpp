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
#include <map>
#include <set>
#include <span>
#include <vector>

#include "remunscan/calendar.hpp"
#include "remunscan/error.hpp"
#include "remunscan/model.hpp"
#include "remunscan/stats.hpp"

namespace remunscan {

using ProfileMap = std::map<Address, OutflowProfile>;

/// Groups outputs by (source, recipient). Payment order within a stream is
/// (time, position in `txs`).
inline ProfileMap build_profiles(std::span<const TxRecord> txs) {
  ProfileMap profiles;
  std::map<Address, std::map<Day, std::set<Address>>> recipients_by_day;
  for (std::size_t seq = 0; seq < txs.size(); ++seq) {
    const TxRecord& tx = txs[seq];
    auto [it, inserted] = profiles.try_emplace(tx.src);
    OutflowProfile& profile = it->second;
    const Day day = day_of(tx.time);
    if (inserted) {
      profile.src = tx.src;
      profile.first_day = profile.last_day = day;
    } else {
      profile.first_day = std::min(profile.first_day, day);
      profile.last_day = std::max(profile.last_day, day);
    }
    auto& todays = recipients_by_day[tx.src][day];
    for (const auto& out : tx.outs) {
      auto& stream = profile.streams[out.addr];
      if (stream.payments.empty()) {
        stream.src = tx.src;
        stream.rcpt = out.addr;
      }
      stream.payments.push_back({tx.time, out.sat, seq});
      todays.insert(out.addr);
      ++profile.total_outputs;
      profile.total_sat += out.sat;
    }
  }
  for (auto& [src, profile] : profiles) {
    for (auto& [rcpt, stream] : profile.streams) {
      std::stable_sort(stream.payments.begin(), stream.payments.end(), [](const Payment& a, const Payment& b) {
        return a.time != b.time ? a.time < b.time : a.seq < b.seq;
      });
    }
    for (const auto& [day, rcpts] : recipients_by_day[src]) profile.daily_outdegree[day] = rcpts.size();
  }
  return profiles;
}

struct DayCount {
  Day day = 0;
  std::size_t recipients = 0;

  friend bool operator==(const DayCount&, const DayCount&) = default;
};

/// Distinct recipients per day over [from_day, to_day], zero-filled.
inline std::vector<DayCount> daily_recipient_histogram(const OutflowProfile& profile, Day from_day, Day to_day) {
  if (from_day > to_day) throw Error(ErrorKind::domain, "histogram range is inverted");
  std::vector<DayCount> out;
  out.reserve(static_cast<std::size_t>(to_day - from_day + 1));
  auto it = profile.daily_outdegree.lower_bound(from_day);
  for (Day d = from_day; d <= to_day; ++d) {
    std::size_t count = 0;
    if (it != profile.daily_outdegree.end() && it->first == d) {
      count = it->second;
      ++it;
    }
    out.push_back({d, count});
  }
  return out;
}

/// Fraction of recipients by number of payments received. Key 1 is the
/// share of addresses paid exactly once.
inline std::map<std::size_t, double> reuse_distribution(const OutflowProfile& profile) {
  if (profile.streams.empty()) throw Error(ErrorKind::domain, "reuse distribution of a profile without recipients");
  std::map<std::size_t, std::size_t> counts;
  for (const auto& [rcpt, stream] : profile.streams) ++counts[stream.size()];
  const auto total = static_cast<double>(profile.streams.size());
  std::map<std::size_t, double> out;
  for (const auto& [times, n] : counts) out[times] = static_cast<double>(n) / total;
  return out;
}

struct MedianBucket {
  Day start_day = 0;
  Decimal median_sat;
};

/// Median payment per `bucket_days` bucket, buckets anchored at first_day.
/// Buckets without payments are omitted.
inline std::vector<MedianBucket> median_series(const OutflowProfile& profile, std::int64_t bucket_days) {
  if (bucket_days < 1) throw Error(ErrorKind::domain, "bucket_days must be >= 1");
  std::map<std::int64_t, std::vector<Sat>> buckets;
  for (const auto& [rcpt, stream] : profile.streams) {
    for (const auto& p : stream.payments) buckets[(p.day() - profile.first_day) / bucket_days].push_back(p.sat);
  }
  std::vector<MedianBucket> out;
  out.reserve(buckets.size());
  for (const auto& [index, amounts] : buckets) {
    out.push_back({profile.first_day + index * bucket_days, median(amounts)});
  }
  return out;
}

/// Day gaps between consecutive payments.
inline std::vector<std::int64_t> interarrival_days(const PaymentStream& stream) {
  std::vector<std::int64_t> gaps;
  for (std::size_t i = 1; i < stream.payments.size(); ++i) {
    gaps.push_back(stream.payments[i].day() - stream.payments[i - 1].day());
  }
  return gaps;
}

}  // namespace remunscan
