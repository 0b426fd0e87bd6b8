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
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "remunscan/calendar.hpp"
#include "remunscan/decimal.hpp"
#include "remunscan/error.hpp"
#include "remunscan/model.hpp"
#include "remunscan/money.hpp"

namespace remunscan {

// ---------------------------------------------------------------------------
// Portable pseudo-random numbers. The platform <random> distributions are
// implementation-defined, so every draw below is spelled out.
// ---------------------------------------------------------------------------

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0, state expanded from the seed with SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], unbiased by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  double exponential(double rate) noexcept { return -std::log1p(-uniform01()) / rate; }

  /// Box-Muller; one normal per call.
  double normal() noexcept {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

inline std::string base32(std::uint64_t v, std::size_t min_width = 1) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";
  std::string out;
  do {
    out.insert(out.begin(), kAlphabet[v & 31]);
    v >>= 5;
  } while (v != 0);
  if (out.size() < min_width) out.insert(0, min_width - out.size(), 'A');
  return out;
}

/// Synthetic address and txid source for one scenario. Addresses are
/// "S" + base32 strings and never valid Bitcoin addresses.
class IdentityMint {
 public:
  IdentityMint(char tag, std::uint64_t seed)
      : prefix_(std::string("S") + tag + base32(seed, 13)),
        txids_(seed ^ (static_cast<std::uint64_t>(static_cast<unsigned char>(tag)) << 56)) {}

  Address address() { return prefix_ + base32(counter_++); }

  std::string txid() {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(64, '0');
    for (int w = 0; w < 4; ++w) {
      std::uint64_t v = txids_.next_u64();
      for (int k = 15; k >= 0; --k) {
        out[static_cast<std::size_t>(w * 16 + k)] = kHex[v & 15];
        v >>= 4;
      }
    }
    return out;
  }

 private:
  std::string prefix_;
  std::uint64_t counter_ = 0;
  Rng txids_;
};

// ---------------------------------------------------------------------------
// Ground truth
// ---------------------------------------------------------------------------

enum class SourceRole { employer, noise, lifecycle };

inline const char* to_string(SourceRole r) noexcept {
  switch (r) {
    case SourceRole::employer: return "employer";
    case SourceRole::noise: return "noise";
    case SourceRole::lifecycle: return "lifecycle";
  }
  return "unknown";
}

/// Employers and lifecycles contain a payroll; noise sources do not.
inline bool is_remunerating(SourceRole r) noexcept { return r != SourceRole::noise; }

struct SourceLabel {
  Address addr;
  SourceRole role = SourceRole::noise;
  std::vector<PhaseSegment> phases;
  std::vector<Address> employees;
};

struct GroundTruth {
  std::vector<SourceLabel> sources;

  void merge(GroundTruth other) {
    for (auto& s : other.sources) sources.push_back(std::move(s));
  }
};

struct Corpus {
  std::vector<TxRecord> txs;
  GroundTruth truth;

  void merge(Corpus other) {
    for (auto& tx : other.txs) txs.push_back(std::move(tx));
    truth.merge(std::move(other.truth));
  }
};

// ---------------------------------------------------------------------------
// Payroll
// ---------------------------------------------------------------------------

enum class SalaryMode { fixed_btc, fixed_fiat };
enum class AddressReuse { stable, fresh };

struct PayrollParams {
  std::int64_t n_employees = 20;
  std::int64_t period_days = 7;
  /// Each payday moves by a uniform integer in [-jitter_days, jitter_days],
  /// except that no payment precedes start_day.
  std::int64_t jitter_days = 0;
  std::int64_t n_periods = 26;
  SalaryMode salary_mode = SalaryMode::fixed_btc;
  Sat salary_sat = 5'000'000;
  Decimal salary_usd = Decimal(50);
  AddressReuse reuse = AddressReuse::stable;
  Day start_day = 17'000;
  std::uint64_t seed = 1;

  void validate() const {
    if (n_employees < 1) throw Error(ErrorKind::config, "n_employees must be >= 1");
    if (period_days < 1) throw Error(ErrorKind::config, "period_days must be >= 1");
    if (jitter_days < 0 || 2 * jitter_days >= period_days) {
      throw Error(ErrorKind::config, "jitter_days must be non-negative and below period_days/2");
    }
    if (n_periods < 2) throw Error(ErrorKind::config, "n_periods must be >= 2");
    if (salary_mode == SalaryMode::fixed_btc && salary_sat < 1) throw Error(ErrorKind::config, "salary sat must be >= 1");
    if (salary_mode == SalaryMode::fixed_fiat && !salary_usd.is_positive()) {
      throw Error(ErrorKind::config, "salary usd must be positive");
    }
    if (start_of(start_day) < kGenesisTime) throw Error(ErrorKind::config, "start_day precedes the genesis block");
  }
};

namespace detail {

inline constexpr UnixTime kPayrollSecondOfDay = 12 * 3600;

inline void sort_by_time(std::vector<TxRecord>& txs) {
  std::stable_sort(txs.begin(), txs.end(), [](const TxRecord& a, const TxRecord& b) { return a.time < b.time; });
}

inline Corpus payroll_into(const PayrollParams& p, const ExchangeRateSeries* rates, Rng& rng, IdentityMint& mint,
                           const Address& src) {
  p.validate();
  if (p.salary_mode == SalaryMode::fixed_fiat && (rates == nullptr || rates->empty())) {
    throw Error(ErrorKind::config, "fixed-fiat salary requires an exchange-rate series");
  }
  std::vector<Address> staff;
  if (p.reuse == AddressReuse::stable) {
    for (std::int64_t e = 0; e < p.n_employees; ++e) staff.push_back(mint.address());
  }
  Corpus out;
  SourceLabel label{src, SourceRole::employer, {}, staff};
  Day last_day = p.start_day;
  for (std::int64_t k = 0; k < p.n_periods; ++k) {
    for (std::int64_t e = 0; e < p.n_employees; ++e) {
      std::int64_t jitter = p.jitter_days > 0 ? rng.uniform_int(-p.jitter_days, p.jitter_days) : 0;
      if (k == 0) jitter = std::max<std::int64_t>(jitter, 0);
      const Day day = p.start_day + k * p.period_days + jitter;
      Sat sat = p.salary_sat;
      if (p.salary_mode == SalaryMode::fixed_fiat) {
        const auto rate = rates->find(day);
        if (!rate) throw Error(ErrorKind::config, "no exchange rate covers payday " + format_date(day));
        sat = fiat_to_sat(p.salary_usd, *rate);
        if (sat < 1) throw Error(ErrorKind::config, "fiat salary rounds to zero satoshi");
      }
      Address rcpt;
      if (p.reuse == AddressReuse::stable) {
        rcpt = staff[static_cast<std::size_t>(e)];
      } else {
        rcpt = mint.address();
        label.employees.push_back(rcpt);
      }
      out.txs.push_back({mint.txid(), start_of(day) + kPayrollSecondOfDay + e, src, {{rcpt, sat}}});
      last_day = std::max(last_day, day);
    }
  }
  sort_by_time(out.txs);
  label.phases.push_back({p.start_day, last_day, PhaseLabel::structured});
  out.truth.sources.push_back(std::move(label));
  return out;
}

}  // namespace detail

/// One employer paying every employee once per period.
inline Corpus gen_payroll(const PayrollParams& params, const ExchangeRateSeries* rates = nullptr) {
  Rng rng(params.seed);
  IdentityMint mint('P', params.seed);
  const Address src = mint.address();
  return detail::payroll_into(params, rates, rng, mint, src);
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

struct NoiseParams {
  std::int64_t n_txs = 200;
  double rate_per_day = 2.0;
  /// Amounts are round(exp(mu + sigma * z)) satoshi, z standard normal.
  double mu = 13.8;
  double sigma = 1.0;
  /// Share of outputs paid to a never-reused address; the rest draw from a
  /// small pool of repeat recipients.
  double fresh_fraction = 1.0;
  std::int64_t pool_size = 16;
  Day start_day = 17'000;
  std::uint64_t seed = 1;

  void validate() const {
    if (n_txs < 0) throw Error(ErrorKind::config, "n_txs must be >= 0");
    if (!(rate_per_day > 0.0) || !std::isfinite(rate_per_day)) {
      throw Error(ErrorKind::config, "rate_per_day must be positive");
    }
    if (!std::isfinite(mu) || mu > 35.0) throw Error(ErrorKind::config, "mu must be finite and at most 35");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorKind::config, "sigma must be non-negative");
    if (!(fresh_fraction >= 0.0 && fresh_fraction <= 1.0)) {
      throw Error(ErrorKind::config, "fresh_fraction must lie in [0, 1]");
    }
    if (fresh_fraction < 1.0 && pool_size < 1) throw Error(ErrorKind::config, "pool_size must be >= 1");
    if (start_of(start_day) < kGenesisTime) throw Error(ErrorKind::config, "start_day precedes the genesis block");
  }
};

namespace detail {

inline constexpr Sat kMaxSyntheticSat = 21'000'000 * kSatPerBtc;

/// Emits noise payments until `count` are made or `until_time` is reached.
/// With `anchor_first` the first payment lands exactly at `t0`.
inline std::vector<TxRecord> noise_into(const NoiseParams& p, Rng& rng, IdentityMint& mint, const Address& src,
                                        UnixTime t0, std::optional<std::int64_t> count,
                                        std::optional<UnixTime> until_time, bool anchor_first) {
  std::vector<Address> pool;
  if (p.fresh_fraction < 1.0) {
    for (std::int64_t i = 0; i < p.pool_size; ++i) pool.push_back(mint.address());
  }
  std::vector<TxRecord> txs;
  UnixTime t = t0;
  for (std::int64_t i = 0; !count || i < *count; ++i) {
    if (!(anchor_first && i == 0)) {
      const auto gap = static_cast<UnixTime>(std::llround(rng.exponential(p.rate_per_day) * kSecondsPerDay));
      t += std::max<UnixTime>(gap, 1);
    }
    if (until_time && t >= *until_time) break;
    const double raw = std::exp(p.mu + p.sigma * rng.normal());
    const Sat sat = std::clamp<Sat>(static_cast<Sat>(std::llround(std::min(raw, 1e17))), 1, kMaxSyntheticSat);
    Address rcpt;
    if (rng.uniform01() < p.fresh_fraction) {
      rcpt = mint.address();
    } else {
      rcpt = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
    }
    txs.push_back({mint.txid(), t, src, {{rcpt, sat}}});
  }
  return txs;
}

}  // namespace detail

/// A spender with exponential inter-arrival gaps and lognormal amounts.
inline Corpus gen_noise(const NoiseParams& params) {
  params.validate();
  Rng rng(params.seed);
  IdentityMint mint('N', params.seed);
  const Address src = mint.address();
  Corpus out;
  out.txs = detail::noise_into(params, rng, mint, src, start_of(params.start_day), params.n_txs, std::nullopt, false);
  if (!out.txs.empty()) {
    out.truth.sources.push_back({src,
                                 SourceRole::noise,
                                 {{day_of(out.txs.front().time), day_of(out.txs.back().time), PhaseLabel::unstructured}},
                                 {}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lifecycle: noise, then silence, then payroll, all from one source.
// ---------------------------------------------------------------------------

struct LifecycleParams {
  std::int64_t noise_days = 90;
  std::int64_t quiet_days = 60;
  NoiseParams noise;
  /// start_day and seed are taken from this struct, not from `payroll`.
  PayrollParams payroll;
  Day start_day = 17'000;
  std::uint64_t seed = 1;

  void validate() const {
    if (noise_days < 1) throw Error(ErrorKind::config, "noise_days must be >= 1");
    if (quiet_days < 1) throw Error(ErrorKind::config, "quiet_days must be >= 1");
    noise.validate();
    payroll.validate();
  }
};

/// Three-phase history. The first noise payment falls on start_day and no
/// payroll payment precedes start_day + noise_days + quiet_days.
inline Corpus gen_lifecycle(const LifecycleParams& params, const ExchangeRateSeries* rates = nullptr) {
  params.validate();
  Rng rng(params.seed);
  IdentityMint mint('L', params.seed);
  const Address src = mint.address();
  const Day quiet_start = params.start_day + params.noise_days;
  const Day payroll_start = quiet_start + params.quiet_days;

  Corpus out;
  out.txs = detail::noise_into(params.noise, rng, mint, src, start_of(params.start_day), std::nullopt,
                               start_of(quiet_start), true);
  PayrollParams payroll = params.payroll;
  payroll.start_day = payroll_start;
  payroll.seed = params.seed;
  Corpus paid = detail::payroll_into(payroll, rates, rng, mint, src);
  for (auto& tx : paid.txs) out.txs.push_back(std::move(tx));

  SourceLabel label = std::move(paid.truth.sources.front());
  label.role = SourceRole::lifecycle;
  const Day payroll_end = label.phases.front().end_day;
  label.phases = {{params.start_day, quiet_start - 1, PhaseLabel::unstructured},
                  {quiet_start, payroll_start - 1, PhaseLabel::quiescent},
                  {payroll_start, payroll_end, PhaseLabel::structured}};
  out.truth.sources.push_back(std::move(label));
  return out;
}

// ---------------------------------------------------------------------------
// Reuse plan: a spender whose recipients are paid an exact number of times.
// ---------------------------------------------------------------------------

struct ReuseParams {
  /// times paid -> number of recipients paid that many times.
  std::map<std::int64_t, std::int64_t> plan{{1, 1}};
  Day start_day = 17'000;
  std::uint64_t seed = 1;

  void validate() const {
    if (plan.empty()) throw Error(ErrorKind::config, "reuse plan must be non-empty");
    for (const auto& [times, n] : plan) {
      if (times < 1 || n < 0) throw Error(ErrorKind::config, "reuse plan entries must be times >= 1, count >= 0");
    }
    if (start_of(start_day) < kGenesisTime) throw Error(ErrorKind::config, "start_day precedes the genesis block");
  }
};

/// Payments are shuffled and spaced one hour apart; each carries 10,000 sat.
inline Corpus gen_reuse(const ReuseParams& params) {
  params.validate();
  Rng rng(params.seed);
  IdentityMint mint('R', params.seed);
  const Address src = mint.address();
  std::vector<Address> schedule;
  for (const auto& [times, n] : params.plan) {
    for (std::int64_t r = 0; r < n; ++r) {
      const Address rcpt = mint.address();
      for (std::int64_t k = 0; k < times; ++k) schedule.push_back(rcpt);
    }
  }
  for (std::size_t i = schedule.size(); i > 1; --i) {
    std::swap(schedule[i - 1], schedule[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  }
  Corpus out;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    out.txs.push_back(
        {mint.txid(), start_of(params.start_day) + static_cast<UnixTime>(i) * 3600, src, {{schedule[i], 10'000}}});
  }
  if (!out.txs.empty()) {
    out.truth.sources.push_back({src,
                                 SourceRole::noise,
                                 {{day_of(out.txs.front().time), day_of(out.txs.back().time), PhaseLabel::unstructured}},
                                 {}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// labels.json
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json labels_to_json(const GroundTruth& truth, std::uint64_t seed,
                                             const nlohmann::ordered_json& params) {
  nlohmann::ordered_json j;
  auto sources = nlohmann::ordered_json::array();
  for (const auto& s : truth.sources) {
    nlohmann::ordered_json o;
    o["addr"] = s.addr;
    o["role"] = to_string(s.role);
    auto phases = nlohmann::ordered_json::array();
    for (const auto& p : s.phases) {
      phases.push_back({{"start_day", format_date(p.start_day)}, {"end_day", format_date(p.end_day)},
                        {"label", to_string(p.label)}});
    }
    o["phases"] = std::move(phases);
    o["employees"] = s.employees;
    sources.push_back(std::move(o));
  }
  j["sources"] = std::move(sources);
  j["seed"] = seed;
  j["params"] = params;
  return j;
}

inline GroundTruth labels_from_json(const nlohmann::json& doc) {
  auto bad = [](const std::string& what) { return Error(ErrorKind::input, "malformed labels: " + what); };
  if (!doc.is_object() || !doc.contains("sources") || !doc["sources"].is_array()) throw bad("missing sources array");
  GroundTruth truth;
  for (const auto& s : doc["sources"]) {
    if (!s.is_object() || !s.contains("addr") || !s["addr"].is_string()) throw bad("source without addr");
    if (!s.contains("role") || !s["role"].is_string()) throw bad("source without role");
    SourceLabel label;
    label.addr = s["addr"].get<std::string>();
    const auto role = s["role"].get<std::string>();
    if (role == "employer") label.role = SourceRole::employer;
    else if (role == "noise") label.role = SourceRole::noise;
    else if (role == "lifecycle") label.role = SourceRole::lifecycle;
    else throw bad("unknown role '" + role + "'");
    if (s.contains("employees")) {
      if (!s["employees"].is_array()) throw bad("employees must be an array");
      for (const auto& e : s["employees"]) {
        if (!e.is_string()) throw bad("employees must be strings");
        label.employees.push_back(e.get<std::string>());
      }
    }
    if (s.contains("phases")) {
      if (!s["phases"].is_array()) throw bad("phases must be an array");
      for (const auto& p : s["phases"]) {
        if (!p.is_object()) throw bad("phase must be an object");
        auto get_day = [&](const char* key) {
          if (!p.contains(key) || !p[key].is_string()) throw bad(std::string("phase without ") + key);
          auto d = parse_date(p[key].get<std::string>());
          if (!d) throw bad(std::string("bad phase ") + key);
          return *d;
        };
        if (!p.contains("label") || !p["label"].is_string()) throw bad("phase without label");
        auto lbl = parse_phase_label(p["label"].get<std::string>());
        if (!lbl) throw bad("unknown phase label");
        label.phases.push_back({get_day("start_day"), get_day("end_day"), *lbl});
      }
    }
    truth.sources.push_back(std::move(label));
  }
  return truth;
}

}  // namespace remunscan
