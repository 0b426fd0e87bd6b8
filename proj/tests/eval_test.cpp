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

#include "remunscan/eval.hpp"
#include "remunscan/detect.hpp"

namespace remunscan {
namespace {

GroundTruth truth_of(std::initializer_list<std::pair<const char*, SourceRole>> sources) {
  GroundTruth t;
  for (const auto& [addr, role] : sources) t.sources.push_back({addr, role, {}, {}});
  return t;
}

TEST(Evaluate, PerfectSplit) {
  const auto m = evaluate({{"E", true, {}}, {"N", false, {}}},
                          truth_of({{"E", SourceRole::employer}, {"N", SourceRole::noise}}));
  EXPECT_EQ(m.tp, 1u);
  EXPECT_EQ(m.tn, 1u);
  EXPECT_EQ(*m.precision, 1.0);
  EXPECT_EQ(*m.recall, 1.0);
  EXPECT_EQ(*m.f1, 1.0);
  EXPECT_EQ(headline(m), "P=1.000 R=1.000 F1=1.000");
}

TEST(Evaluate, NothingFlagged) {
  const auto m = evaluate({{"E", false, {}}}, truth_of({{"E", SourceRole::employer}}));
  EXPECT_EQ(m.fn, 1u);
  EXPECT_EQ(*m.recall, 0.0);
  EXPECT_FALSE(m.precision);
  EXPECT_EQ(*m.f1, 0.0);
  EXPECT_EQ(headline(m), "P=n/a R=0.000 F1=0.000");
  const auto j = metrics_to_json(m);
  EXPECT_TRUE(j["precision"].is_null());
  EXPECT_EQ(j["recall"], 0.0);
}

TEST(Evaluate, NoPositivesAnywhere) {
  const auto m = evaluate({{"N", false, {}}}, truth_of({{"N", SourceRole::noise}}));
  EXPECT_FALSE(m.precision);
  EXPECT_FALSE(m.recall);
  EXPECT_FALSE(m.f1);
  EXPECT_EQ(headline(m), "P=n/a R=n/a F1=n/a");
}

TEST(Evaluate, LifecycleCountsAsRemunerating) {
  const auto m = evaluate({{"L", true, {}}, {"N", true, {}}},
                          truth_of({{"L", SourceRole::lifecycle}, {"N", SourceRole::noise}}));
  EXPECT_EQ(m.tp, 1u);
  EXPECT_EQ(m.fp, 1u);
  EXPECT_DOUBLE_EQ(*m.precision, 0.5);
  EXPECT_DOUBLE_EQ(*m.f1, 2.0 / 3.0);
}

TEST(Evaluate, RecipientJaccard) {
  std::vector<Address> staff;
  for (int i = 0; i < 20; ++i) staff.push_back("e" + std::to_string(i));
  GroundTruth t;
  t.sources.push_back({"E", SourceRole::employer, {}, staff});
  EXPECT_EQ(evaluate({{"E", true, staff}}, t).recipient_jaccard.at("E"), 1.0);
  std::vector<Address> half(staff.begin(), staff.begin() + 10);
  EXPECT_DOUBLE_EQ(evaluate({{"E", true, half}}, t).recipient_jaccard.at("E"), 0.5);
  EXPECT_EQ(evaluate({{"E", false, {}}}, t).recipient_jaccard.at("E"), 0.0);
}

TEST(Evaluate, MismatchedSourcesIsAnInputError) {
  try {
    evaluate({{"A", true, {}}}, truth_of({{"B", SourceRole::noise}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
    EXPECT_NE(std::string(e.what()).find("A (not labeled)"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("B (not in report)"), std::string::npos);
  }
}

TEST(Jaccard, Basics) {
  EXPECT_EQ(jaccard({}, {}), 1.0);
  EXPECT_EQ(jaccard({"a"}, {}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard({"a", "b", "c"}, {"b", "c", "d"}), 0.5);
  EXPECT_EQ(jaccard({"a", "a"}, {"a"}), 1.0);
}

TEST(F1, SymmetricAndZeroAbsorbing) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = unit(gen);
    const double r = unit(gen);
    ASSERT_EQ(f1_score(p, r), f1_score(r, p));
    ASSERT_LE(*f1_score(p, r), std::max(p, r) + 1e-15);
    ASSERT_GE(*f1_score(p, r), std::min(p, r) - 1e-15);
    ASSERT_EQ(*f1_score(0.0, r), 0.0);
    ASSERT_EQ(*f1_score(std::nullopt, 0.0), 0.0);
    ASSERT_FALSE(f1_score(std::nullopt, r + 0.01));
  }
}

TEST(Evaluate, ConfusionCountsSumToSources) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ReportedSource> report;
    GroundTruth t;
    const int n = 1 + static_cast<int>(gen() % 40);
    for (int i = 0; i < n; ++i) {
      const std::string a = "s" + std::to_string(i);
      report.push_back({a, (gen() & 1) != 0, {}});
      t.sources.push_back({a, static_cast<SourceRole>(gen() % 3), {}, {}});
    }
    const auto m = evaluate(report, t);
    ASSERT_EQ(m.tp + m.fp + m.fn + m.tn, static_cast<std::size_t>(n));
    if (m.precision) {
      ASSERT_TRUE(*m.precision >= 0.0 && *m.precision <= 1.0);
    }
  }
}

}  // namespace
}  // namespace remunscan
