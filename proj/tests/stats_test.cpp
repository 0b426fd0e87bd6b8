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

#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "remunscan/stats.hpp"
#include "test_util.hpp"

namespace remunscan {
namespace {

TEST(Median, Examples) {
  EXPECT_EQ(median(std::vector<int>{1, 3, 2}), Decimal(2));
  EXPECT_EQ(median(std::vector<int>{1, 2, 3, 4}), Decimal::parse("2.5"));
  EXPECT_EQ(median(std::vector<Decimal>{Decimal::parse("0.1"), Decimal::parse("0.2")}), Decimal::parse("0.15"));
}

TEST(Median, AliceAmounts) {
  std::vector<Sat> amounts;
  for (const auto& tx : testing::load_alice()) amounts.push_back(tx.outs.at(0).sat);
  ASSERT_EQ(amounts.size(), 15u);
  EXPECT_EQ(median(amounts), Decimal(1503248));
}

TEST(Median, EmptyIsDomainError) {
  try {
    median(std::vector<int>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(Median, PermutationInvariantAndBounded) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<Sat> value(1, 1'000'000);
  std::uniform_int_distribution<int> length(1, 40);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Sat> xs(static_cast<std::size_t>(length(gen)));
    for (auto& x : xs) x = value(gen);
    const Decimal m = median(xs);
    std::shuffle(xs.begin(), xs.end(), gen);
    ASSERT_EQ(median(xs), m);
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    ASSERT_GE(m, Decimal(*lo));
    ASSERT_LE(m, Decimal(*hi));
  }
}

TEST(CoefficientOfVariation, Examples) {
  EXPECT_DOUBLE_EQ(coefficient_of_variation(std::vector<int>{7, 7, 7, 7}), 0.0);
  EXPECT_DOUBLE_EQ(coefficient_of_variation(std::vector<int>{1, 3}), 0.5);
  // Oracle: mean 17/2, population variance 167/28 over the 14 day gaps.
  const std::vector<int> gaps{8, 13, 7, 7, 7, 7, 7, 7, 14, 7, 7, 9, 12, 7};
  EXPECT_NEAR(coefficient_of_variation(gaps), 0.287316319282, 1e-12);
}

TEST(CoefficientOfVariation, Errors) {
  try {
    coefficient_of_variation(std::vector<int>{5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
  }
  try {
    coefficient_of_variation(std::vector<int>{0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(CoefficientOfVariation, ScaleInvariant) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> value(0.1, 1000.0);
  std::uniform_real_distribution<double> scale(1e-3, 1e6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> xs(2 + trial % 30);
    for (auto& x : xs) x = value(gen);
    const double k = scale(gen);
    std::vector<double> scaled;
    for (double x : xs) scaled.push_back(k * x);
    ASSERT_NEAR(coefficient_of_variation(scaled), coefficient_of_variation(xs), 1e-9);
  }
}

}  // namespace
}  // namespace remunscan
