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

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "remunscan/detect.hpp"
#include "remunscan/ingest.hpp"
#include "remunscan/synth.hpp"
#include "test_util.hpp"

namespace remunscan {
namespace {

std::string jsonl(const Corpus& c) {
  std::ostringstream out;
  write_transactions(out, c.txs);
  return out.str();
}

// Vectors from an independent implementation of the same generators.
TEST(Rng, SplitMix64Vectors) {
  SplitMix64 sm(1234567);
  for (std::uint64_t want : {6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL,
                             4593380528125082431ULL, 16408922859458223821ULL}) {
    EXPECT_EQ(sm.next(), want);
  }
}

TEST(Rng, Xoshiro256StarStarVectors) {
  Rng rng(42);
  for (std::uint64_t want : {1546998764402558742ULL, 6990951692964543102ULL, 12544586762248559009ULL,
                             17057574109182124193ULL, 18295552978065317476ULL}) {
    EXPECT_EQ(rng.next_u64(), want);
  }
}

TEST(Rng, DistributionsStayInRange) {
  Rng rng(7);
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const auto k = rng.uniform_int(-3, 3);
    ASSERT_GE(k, -3);
    ASSERT_LE(k, 3);
    ASSERT_GE(rng.exponential(2.0), 0.0);
    ASSERT_TRUE(std::isfinite(rng.normal()));
  }
}

TEST(Rng, UniformIntHitsEveryValue) {
  Rng rng(9);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(rng.uniform_int(0, 6));
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Base32, Encoding) {
  EXPECT_EQ(base32(0), "A");
  EXPECT_EQ(base32(31).size(), 1u);
  EXPECT_EQ(base32(32).size(), 2u);
  EXPECT_EQ(base32(5, 4).size(), 4u);
}

TEST(GenPayroll, StrictWeeklyConstruction) {
  PayrollParams p;
  p.n_employees = 20;
  p.period_days = 7;
  p.jitter_days = 0;
  p.n_periods = 26;
  p.salary_sat = 5'000'000;
  const Corpus c = gen_payroll(p);
  std::size_t outputs = 0;
  for (const auto& tx : c.txs) outputs += tx.outs.size();
  EXPECT_EQ(outputs, 520u);
  EXPECT_EQ(c.txs.size(), 520u);
  const auto profiles = build_profiles(c.txs);
  ASSERT_EQ(profiles.size(), 1u);
  const auto& profile = profiles.begin()->second;
  ASSERT_EQ(profile.streams.size(), 20u);
  for (const auto& [rcpt, s] : profile.streams) {
    EXPECT_EQ(s.payments.size(), 26u);
    EXPECT_EQ(*stream_periodicity(s, 4).interval_cv, 0.0);
    EXPECT_EQ(stream_amount_band(s, 0.5).inband_fraction, 1.0);
  }
  ASSERT_EQ(c.truth.sources.size(), 1u);
  EXPECT_EQ(c.truth.sources[0].role, SourceRole::employer);
  EXPECT_EQ(c.truth.sources[0].employees.size(), 20u);
  for (const auto& tx : c.txs) EXPECT_NO_THROW(check_tx(tx));
}

TEST(GenPayroll, MinimalCorpus) {
  PayrollParams p;
  p.n_employees = 1;
  p.n_periods = 2;
  const Corpus c = gen_payroll(p);
  EXPECT_EQ(c.txs.size(), 2u);
  EXPECT_EQ(build_profiles(c.txs).begin()->second.streams.size(), 1u);
}

TEST(GenPayroll, FiatPeggedAmountsFallAsRateRises) {
  PayrollParams p;
  p.n_employees = 3;
  p.n_periods = 26;
  p.salary_mode = SalaryMode::fixed_fiat;
  const auto rates = testing::linear_rates(p.start_day, 200, 340.0, 930.0);
  const auto profiles = build_profiles(gen_payroll(p, &rates).txs);
  for (const auto& [rcpt, s] : profiles.begin()->second.streams) {
    const auto amounts = s.amounts();
    for (std::size_t i = 1; i < amounts.size(); ++i) EXPECT_LT(amounts[i], amounts[i - 1]);
    for (const auto& pay : s.payments) {
      EXPECT_EQ(pay.sat, fiat_to_sat(Decimal(50), rate_at(rates, day_of(pay.time))));
    }
  }
}

TEST(GenPayroll, FreshAddressesNeverRepeat) {
  PayrollParams p;
  p.reuse = AddressReuse::fresh;
  p.n_employees = 5;
  p.n_periods = 10;
  const Corpus c = gen_payroll(p);
  const auto dist = reuse_distribution(build_profiles(c.txs).begin()->second);
  EXPECT_EQ(dist, (std::map<std::size_t, double>{{1, 1.0}}));
}

TEST(GenPayroll, ConfigErrors) {
  auto expect_config = [](auto&& fn) {
    try {
      fn();
      ADD_FAILURE() << "no error";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::config);
    }
  };
  PayrollParams fiat;
  fiat.salary_mode = SalaryMode::fixed_fiat;
  expect_config([&] { gen_payroll(fiat); });
  PayrollParams p;
  p.n_employees = 0;
  expect_config([&] { gen_payroll(p); });
  p = {};
  p.jitter_days = 4;  // 2*4 >= 7
  expect_config([&] { gen_payroll(p); });
  p = {};
  p.n_periods = 1;
  expect_config([&] { gen_payroll(p); });
  NoiseParams n;
  n.sigma = -1;
  expect_config([&] { gen_noise(n); });
  n = {};
  n.rate_per_day = 0;
  expect_config([&] { gen_noise(n); });
  LifecycleParams l;
  l.noise_days = 0;
  expect_config([&] { gen_lifecycle(l); });
  ReuseParams r;
  r.plan = {};
  expect_config([&] { gen_reuse(r); });
}

TEST(GenNoise, EmptyAndFresh) {
  NoiseParams p;
  p.n_txs = 0;
  const Corpus empty = gen_noise(p);
  EXPECT_TRUE(empty.txs.empty());
  EXPECT_TRUE(empty.truth.sources.empty());

  p.n_txs = 300;
  const Corpus fresh = gen_noise(p);
  EXPECT_EQ(fresh.txs.size(), 300u);
  EXPECT_EQ(reuse_distribution(build_profiles(fresh.txs).begin()->second),
            (std::map<std::size_t, double>{{1, 1.0}}));
  for (const auto& tx : fresh.txs) {
    EXPECT_NO_THROW(check_tx(tx));
    for (const auto& o : tx.outs) EXPECT_GT(o.sat, 0);
  }
}

TEST(GenNoise, PoolRecipientsRepeat) {
  NoiseParams p;
  p.fresh_fraction = 0.0;
  p.pool_size = 3;
  const auto profile = build_profiles(gen_noise(p).txs).begin()->second;
  EXPECT_LE(profile.streams.size(), 3u);
}

TEST(Determinism, SameSeedSameBytes) {
  PayrollParams p;
  p.jitter_days = 1;
  p.seed = 11;
  EXPECT_EQ(jsonl(gen_payroll(p)), jsonl(gen_payroll(p)));
  NoiseParams n;
  n.seed = 11;
  EXPECT_EQ(jsonl(gen_noise(n)), jsonl(gen_noise(n)));
  LifecycleParams l;
  l.seed = 11;
  EXPECT_EQ(jsonl(gen_lifecycle(l)), jsonl(gen_lifecycle(l)));
  p.seed = 12;
  n.seed = 12;
  EXPECT_NE(jsonl(gen_payroll(p)), jsonl(gen_payroll(PayrollParams{})));
}

TEST(Determinism, SeedsYieldDisjointIdentities) {
  std::set<Address> sources;
  std::set<std::string> txids;
  for (std::uint64_t s = 1; s <= 30; ++s) {
    PayrollParams p;
    p.seed = s;
    NoiseParams n;
    n.seed = s;
    for (const Corpus& c : {gen_payroll(p), gen_noise(n)}) {
      ASSERT_TRUE(sources.insert(c.truth.sources.at(0).addr).second);
      for (const auto& tx : c.txs) ASSERT_TRUE(txids.insert(tx.txid).second);
    }
  }
}

TEST(GenLifecycle, GroundTruthBoundaries) {
  LifecycleParams l;
  l.noise_days = 90;
  l.quiet_days = 60;
  l.payroll.n_periods = 26;  // 180 days at weekly cadence
  l.payroll.jitter_days = 1;
  l.start_day = 17'100;
  const Corpus c = gen_lifecycle(l);
  const auto& phases = c.truth.sources.at(0).phases;
  ASSERT_EQ(phases.size(), 3u);
  EXPECT_EQ(phases[0], (PhaseSegment{17'100, 17'189, PhaseLabel::unstructured}));
  EXPECT_EQ(phases[1], (PhaseSegment{17'190, 17'249, PhaseLabel::quiescent}));
  EXPECT_EQ(phases[2].start_day, 17'250);
  EXPECT_EQ(phases[2].label, PhaseLabel::structured);
  EXPECT_EQ(day_of(c.txs.front().time), 17'100);
  for (const auto& tx : c.txs) {
    const Day d = day_of(tx.time);
    EXPECT_TRUE(d < 17'190 || d >= 17'250) << format_date(d);
    EXPECT_LE(d, phases[2].end_day);
  }
}

TEST(GenReuse, PlannedFractionsAreExact) {
  ReuseParams r;
  r.plan = {{1, 6}, {2, 3}, {5, 1}};
  const Corpus c = gen_reuse(r);
  EXPECT_EQ(c.txs.size(), 6u + 6u + 5u);
  const auto dist = reuse_distribution(build_profiles(c.txs).begin()->second);
  EXPECT_DOUBLE_EQ(dist.at(1), 0.6);
  EXPECT_DOUBLE_EQ(dist.at(2), 0.3);
  EXPECT_DOUBLE_EQ(dist.at(5), 0.1);
}

TEST(Labels, RoundTrip) {
  Corpus c;
  LifecycleParams l;
  c.merge(gen_lifecycle(l));
  c.merge(gen_noise(NoiseParams{}));
  c.merge(gen_payroll(PayrollParams{}));
  const auto doc = labels_to_json(c.truth, 5, {{"scenario", "mixed"}});
  const GroundTruth back = labels_from_json(nlohmann::json::parse(doc.dump()));
  ASSERT_EQ(back.sources.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.sources[i].addr, c.truth.sources[i].addr);
    EXPECT_EQ(back.sources[i].role, c.truth.sources[i].role);
    EXPECT_EQ(back.sources[i].employees, c.truth.sources[i].employees);
    EXPECT_EQ(back.sources[i].phases, c.truth.sources[i].phases);
  }
  EXPECT_THROW(labels_from_json(nlohmann::json::parse(R"({"sources":[{"addr":"x","role":"boss"}]})")), Error);
  EXPECT_THROW(labels_from_json(nlohmann::json::array()), Error);
}

// Core oracle loop: employers pass H1 at defaults, pure noise fails.
TEST(LabelSoundness, EmployersPassNoiseFails) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    PayrollParams p;
    p.seed = seed;
    p.jitter_days = static_cast<std::int64_t>(seed % 2);
    p.n_periods = 8 + static_cast<std::int64_t>(seed % 20);
    // H1 needs min_qualifying_streams (5) recipients to pass at all.
    p.n_employees = 5 + static_cast<std::int64_t>(seed % 16);
    p.period_days = 7 + static_cast<std::int64_t>(seed % 24);
    p.reuse = AddressReuse::stable;
    NoiseParams n;
    n.seed = seed;
    n.n_txs = static_cast<std::int64_t>(seed * 10);
    n.fresh_fraction = static_cast<double>(seed % 5) / 4.0;
    Corpus c;
    c.merge(gen_payroll(p));
    c.merge(gen_noise(n));
    const auto profiles = build_profiles(c.txs);
    for (const auto& label : c.truth.sources) {
      const auto it = profiles.find(label.addr);
      if (it == profiles.end()) continue;
      const bool pass = detect_remuneration(it->second, Heuristic1Config{}).pass;
      if (label.role == SourceRole::employer) {
        EXPECT_TRUE(pass) << "seed " << seed;
      } else if (n.fresh_fraction == 1.0) {
        EXPECT_FALSE(pass) << "seed " << seed;
      }
    }
  }
}

}  // namespace
}  // namespace remunscan
