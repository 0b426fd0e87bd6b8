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

#include <random>

#include <gtest/gtest.h>

#include "remunscan/calendar.hpp"
#include "remunscan/decimal.hpp"
#include "remunscan/model.hpp"
#include "remunscan/money.hpp"

namespace remunscan {
namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::input;
}

TEST(Money, BtcToSatExamples) {
  EXPECT_EQ(btc_to_sat("0.01413267"), 1413267);
  EXPECT_EQ(btc_to_sat("1"), 100000000);
  EXPECT_EQ(btc_to_sat("0.00000001"), 1);
  EXPECT_EQ(btc_to_sat("21000000"), 2100000000000000);
}

TEST(Money, BtcToSatErrors) {
  EXPECT_EQ(kind_of([] { btc_to_sat("0.000000001"); }), ErrorKind::precision);
  EXPECT_EQ(kind_of([] { btc_to_sat("0"); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { btc_to_sat("-1"); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { btc_to_sat("abc"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { btc_to_sat(""); }), ErrorKind::parse);
}

TEST(Money, SatToBtcFormatting) {
  EXPECT_EQ(sat_to_btc(1413267), "0.01413267");
  EXPECT_EQ(sat_to_btc(100000000), "1.00000000");
  EXPECT_EQ(sat_to_btc(1), "0.00000001");
}

TEST(Money, SatBtcRoundTripProperty) {
  std::mt19937_64 gen(20161212);
  std::uniform_int_distribution<Sat> dist(1, 2'100'000'000'000'000);
  for (int i = 0; i < 5000; ++i) {
    const Sat s = i < 100 ? i + 1 : dist(gen);
    ASSERT_EQ(btc_to_sat(sat_to_btc(s)), s) << s;
  }
}

TEST(Money, FiatValueReproducesReportedCompensation) {
  EXPECT_EQ(fiat_value(btc_to_sat("0.25"), Decimal::parse("340")).to_string(2), "85.00");
  EXPECT_EQ(fiat_value(btc_to_sat("0.05"), Decimal::parse("930")).to_string(2), "46.50");
  EXPECT_EQ(fiat_value(btc_to_sat("1"), Decimal(1)).to_string(2), "1.00");
  EXPECT_EQ(fiat_value(btc_to_sat("0.25"), Decimal::parse("340.00")), Decimal::parse("85"));
}

TEST(Money, FiatToSatRoundsHalfToEven) {
  // 50 / 340 BTC = 14705882.35... sat
  EXPECT_EQ(fiat_to_sat(Decimal(50), Decimal(340)), 14705882);
  // 0.000000025 BTC worth at rate 1 -> 2.5 sat -> 2 ; 3.5 sat -> 4
  EXPECT_EQ(fiat_to_sat(Decimal::parse("0.000000025"), Decimal(1)), 2);
  EXPECT_EQ(fiat_to_sat(Decimal::parse("0.000000035"), Decimal(1)), 4);
  EXPECT_EQ(fiat_to_sat(Decimal::parse("0.000000026"), Decimal(1)), 3);
}

TEST(Decimal, ParseFormatAndCompare) {
  EXPECT_EQ(Decimal::parse("340.0").to_string(), "340");
  EXPECT_EQ(Decimal::parse("0.050").to_string(2), "0.05");
  EXPECT_EQ(Decimal::parse("-1.5").to_string(), "-1.5");
  EXPECT_EQ(Decimal::parse("0.5").to_string(3), "0.500");
  EXPECT_LT(Decimal::parse("0.1"), Decimal::parse("0.11"));
  EXPECT_EQ(Decimal::parse("2.50"), Decimal::parse("2.5"));
  EXPECT_EQ((Decimal(3) + Decimal(4)).halved(), Decimal::parse("3.5"));
  EXPECT_EQ(Decimal::parse("1.25") * Decimal::parse("0.4"), Decimal::parse("0.5"));
  EXPECT_EQ(Decimal::parse("1") - Decimal::parse("0.25"), Decimal::parse("0.75"));
  EXPECT_EQ(kind_of([] { Decimal::parse("1.2.3"); }), ErrorKind::parse);
  EXPECT_EQ(kind_of([] { Decimal::parse("."); }), ErrorKind::parse);
}

TEST(Decimal, OverflowIsAnError) {
  const Decimal big = Decimal::from_parts(Decimal::pow10(30), 0);
  EXPECT_EQ(kind_of([&] { (void)(big * big); }), ErrorKind::domain);
}

TEST(Calendar, DaysAreFlooredUtc) {
  EXPECT_EQ(day_of(0), 0);
  EXPECT_EQ(day_of(86399), 0);
  EXPECT_EQ(day_of(86400), 1);
  EXPECT_EQ(format_date(*parse_date("2016-12-12")), "2016-12-12");
  EXPECT_EQ(*parse_date("1970-01-02"), 1);
  EXPECT_EQ(day_of(1481544000), *parse_date("2016-12-12"));
  EXPECT_FALSE(parse_date("2016-02-30"));
  EXPECT_FALSE(parse_date("2016-1-01"));
  EXPECT_FALSE(parse_date("20161201"));
}

TEST(Model, TxInvariants) {
  TxRecord ok{std::string(64, 'a'), kGenesisTime, "src", {{"dst", 1}}};
  EXPECT_FALSE(check_tx(ok));
  auto bad = ok;
  bad.txid = std::string(64, 'A');
  EXPECT_TRUE(check_tx(bad));
  bad = ok;
  bad.time = kGenesisTime - 1;
  EXPECT_TRUE(check_tx(bad));
  bad = ok;
  bad.outs.clear();
  EXPECT_TRUE(check_tx(bad));
  bad = ok;
  bad.outs[0].sat = 0;
  EXPECT_TRUE(check_tx(bad));
  bad = ok;
  bad.src = std::string(91, 'x');
  EXPECT_TRUE(check_tx(bad));
}

TEST(Model, ConfigValidation) {
  DetectConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.h1.rho = 1.0;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::config);
  cfg = {};
  cfg.h1.min_interval_days = 50;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::config);
  cfg = {};
  cfg.h2.theta_rel = 1.0;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::config);
  cfg = {};
  cfg.h1.min_payments_per_stream = 1;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::config);
  cfg = {};
  cfg.phase.window_days = 0;
  EXPECT_EQ(kind_of([&] { cfg.validate(); }), ErrorKind::config);
}

TEST(Model, RateSeriesInvariants) {
  EXPECT_EQ(kind_of([] { ExchangeRateSeries({{2, Decimal(1)}, {1, Decimal(1)}}); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { ExchangeRateSeries({{1, Decimal(0)}}); }), ErrorKind::domain);
}

}  // namespace
}  // namespace remunscan
