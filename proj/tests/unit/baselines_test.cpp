//
// Copyright 2026 The zsl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "zsl/baselines.hpp"

namespace zsl {
namespace {

std::vector<ClassMeta> classes() {
  return {{1, "Company", "company", "", std::nullopt, ""},
          {2, "Building", "building", "", std::nullopt, ""},
          {3, "Mean Of Transportation", "vehicle", "", std::nullopt, ""}};
}

EmbeddingStore toy_store() {
  EmbeddingStore s(3);
  const std::vector<std::pair<std::string, std::vector<float>>> rows = {
      {"company", {1, 0, 0}},   {"building", {0, 1, 0}},
      {"mean", {0, 0, 1}},      {"of", {0.1f, 0.1f, 0.1f}},
      {"transportation", {0, 0.2f, 1}}, {"firm", {0.9f, 0.1f, 0}},
      {"tower", {0.1f, 0.95f, 0}}};
  for (const auto& [w, v] : rows) s.add(w, v);
  return s;
}

TEST(CountBaseline, MostFrequentLabelWins) {
  const auto c = classes();
  EXPECT_EQ(baseline_count(Document{"d", {"building", "building", "company"}, {}}, c), 2u);
  EXPECT_EQ(baseline_count(Document{"d", {"vehicle", "company"}, {}}, c), 1u);
  EXPECT_EQ(baseline_count(Document{"d", {"nothing", "here"}, {}}, c), 1u);
  EXPECT_EQ(baseline_count(Document{"d", {}, {}}, c), 1u);
  EXPECT_THROW(baseline_count(Document{"d", {"x"}, {}}, std::vector<ClassMeta>{}), Error);
}

TEST(CountBaseline, PropertyMatchesNaiveArgmax) {
  const auto c = classes();
  const std::vector<std::string> pool{"company", "building", "vehicle", "x", "y"};
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    Document d{"d", {}, {}};
    const std::size_t n = uniform_index(rng, 12);
    for (std::size_t i = 0; i < n; ++i) d.tokens.push_back(pool[uniform_index(rng, pool.size())]);
    std::size_t best_n = 0;
    ClassId best = 1;
    for (const auto& m : c) {
      std::size_t k = 0;
      for (const auto& t : d.tokens) k += t == m.one_word_label;
      if (k > best_n) {
        best_n = k;
        best = m.class_id;
      }
    }
    ASSERT_EQ(baseline_count(d, c), best);
  }
}

TEST(LabelSimilarity, ExactUnigramScoresOne) {
  const auto store = toy_store();
  const auto c = classes();
  const LabelSimilarityBaseline b(store, c);
  const auto s = b.scores(Document{"d", {"company", "zzz"}, {}});
  EXPECT_NEAR(s[0], 1.0, 1e-12);
  EXPECT_LT(s[1], 1.0);
  EXPECT_EQ(b.predict(Document{"d", {"tower"}, {}}), 2u);
  EXPECT_EQ(b.predict(Document{"d", {"firm"}, {}}), 1u);
}

TEST(LabelSimilarity, MultiwordLabelMatchesTrigram) {
  const auto store = toy_store();
  const auto c = classes();
  const LabelSimilarityBaseline b(store, c);
  const auto s = b.scores(Document{"d", {"mean", "of", "transportation"}, {}});
  EXPECT_NEAR(s[2], 1.0, 1e-12);
  EXPECT_EQ(b.predict(Document{"d", {"mean", "of", "transportation"}, {}}), 3u);
}

TEST(LabelSimilarity, SingleTokenAndEmptyDocuments) {
  const auto store = toy_store();
  const auto c = classes();
  const LabelSimilarityBaseline b(store, c);
  const auto one = b.scores(Document{"d", {"building"}, {}});
  EXPECT_NEAR(one[1], 1.0, 1e-12);
  const auto none = b.scores(Document{"d", {"qqq"}, {}});
  for (double v : none) EXPECT_EQ(v, -std::numeric_limits<double>::infinity());
  EXPECT_EQ(b.predict(Document{"d", {"qqq"}, {}}), 1u);
}

TEST(LabelSimilarity, MeanNeverExceedsMax) {
  const auto store = toy_store();
  const auto c = classes();
  const LabelSimilarityBaseline mx(store, c, LabelAggregation::kMax);
  const LabelSimilarityBaseline mean(store, c, LabelAggregation::kMean);
  const std::vector<std::string> pool{"company", "building", "mean", "of",
                                      "transportation", "firm", "tower", "zzz"};
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    Document d{"d", {}, {}};
    const std::size_t n = 1 + uniform_index(rng, 8);
    for (std::size_t i = 0; i < n; ++i) d.tokens.push_back(pool[uniform_index(rng, pool.size())]);
    const auto a = mx.scores(d);
    const auto m = mean.scores(d);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (std::isinf(a[k])) continue;
      ASSERT_LE(m[k], a[k] + 1e-12);
      ASSERT_LE(a[k], 1.0 + 1e-12);
    }
  }
  EXPECT_EQ(parse_label_aggregation("mean"), LabelAggregation::kMean);
  EXPECT_EQ(to_string(LabelAggregation::kMax), "max");
  EXPECT_THROW(parse_label_aggregation("median"), Error);
}

}  // namespace
}  // namespace zsl
