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

#include <atomic>
#include <set>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "zsl/common.hpp"
#include "zsl/csv.hpp"

namespace zsl {
namespace {

TEST(MixSeed, MatchesSplitMix64Reference) {
  // First splitmix64 output for state 0.
  EXPECT_EQ(mix_seed(0), 0xe220a8397b1dcdafULL);
}

TEST(DeriveSeed, DeterministicAndTagSensitive) {
  EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
  EXPECT_NE(derive_seed(7, {}), derive_seed(7, {0}));
}

TEST(DeriveSeed, PropertyNoCollisionsOverSmallGrid) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 20; ++m) {
    for (std::uint64_t a = 0; a < 20; ++a) {
      for (std::uint64_t b = 0; b < 5; ++b) {
        EXPECT_TRUE(seen.insert(derive_seed(m, {a, b})).second);
      }
    }
  }
}

TEST(UniformIndex, StaysInRangeAndCoversIt) {
  Rng rng(3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = uniform_index(rng, 7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
  EXPECT_THROW(uniform_index(rng, 0), Error);
}

TEST(UniformUnit, HalfOpenInterval) {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_unit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Shuffle, PermutesAndIsSeedDeterministic) {
  std::vector<int> a(50), b;
  for (int i = 0; i < 50; ++i) a[i] = i;
  b = a;
  Rng r1(9), r2(9);
  shuffle(a, r1);
  shuffle(b, r2);
  EXPECT_EQ(a, b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (std::size_t workers : {1u, 2u, 4u}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, workers, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 4) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Strings, SplitKeepsEmptyFieldsAndTrim) {
  EXPECT_EQ(split("a\t\tb", '\t'), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(split("", ','), (std::vector<std::string>{""}));
  EXPECT_EQ(trim("  x y \n"), "x y");
  EXPECT_EQ(trim("   "), "");
}

TEST(Files, ReadWriteRoundTripAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "zsl_common_rw";
  write_file(path, "hello\nworld");
  EXPECT_EQ(read_file(path), "hello\nworld");
  std::filesystem::remove(path);
  EXPECT_THROW(read_file(path), Error);
}

TEST(Csv, QuotedFieldsWithSeparatorsQuotesAndNewlines) {
  std::istringstream in("a,\"b,c\",\"say \"\"hi\"\"\"\n\"multi\nline\",x,\n");
  CsvReader reader(in);
  std::vector<std::string> f;
  ASSERT_TRUE(reader.next(f));
  EXPECT_EQ(f, (std::vector<std::string>{"a", "b,c", "say \"hi\""}));
  EXPECT_EQ(reader.line(), 1u);
  ASSERT_TRUE(reader.next(f));
  EXPECT_EQ(f, (std::vector<std::string>{"multi\nline", "x", ""}));
  EXPECT_EQ(reader.line(), 2u);
  EXPECT_FALSE(reader.next(f));
}

TEST(Csv, UnterminatedQuoteIsAnError) {
  std::istringstream in("a,\"open\n");
  CsvReader reader(in, "bad.csv");
  std::vector<std::string> f;
  EXPECT_THROW(reader.next(f), Error);
}

TEST(Csv, PropertyEscapeThenParseIsIdentity) {
  Rng rng(11);
  const std::string alphabet = "ab,\"\n x";
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> fields(1 + uniform_index(rng, 4));
    for (auto& field : fields) {
      const auto n = uniform_index(rng, 6);
      for (std::size_t i = 0; i < n; ++i) {
        field += alphabet[uniform_index(rng, alphabet.size())];
      }
    }
    std::istringstream in(csv_join(fields) + "\n");
    CsvReader reader(in);
    std::vector<std::string> parsed;
    ASSERT_TRUE(reader.next(parsed));
    EXPECT_EQ(parsed, fields);
  }
}

}  // namespace
}  // namespace zsl
