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

#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "synthetic_world.hpp"
#include "zsl/augment.hpp"

namespace zsl {
namespace {

namespace fs = std::filesystem;

const fs::path kData = ZSL_TEST_DATA;

using Tokens = std::vector<std::string>;

Tokens words(const std::string& text) {
  std::istringstream in(text);
  Tokens out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

ClassMeta meta(ClassId id, const std::string& word) {
  ClassMeta m;
  m.class_id = id;
  m.label = word;
  m.one_word_label = word;
  return m;
}

TEST(PosTags, ParseAndValidity) {
  EXPECT_EQ(parse_pos_tag("NOUN"), PosTag::kNoun);
  EXPECT_EQ(parse_pos_tag("ADV"), PosTag::kAdv);
  EXPECT_FALSE(parse_pos_tag("NOPE").has_value());
  PosLexicon lex;
  lex.add("snail", PosTag::kNoun);
  lex.add("the", PosTag::kOther);
  lex.add("run", PosTag::kVerb, {PosTag::kNoun});
  EXPECT_TRUE(is_valid_pos("snail", lex));
  EXPECT_FALSE(is_valid_pos("the", lex));
  EXPECT_FALSE(is_valid_pos("absent", lex));
  EXPECT_TRUE(lex.has_tag("run", PosTag::kVerb));
  EXPECT_TRUE(lex.has_tag("run", PosTag::kNoun));
  EXPECT_FALSE(lex.has_tag("run", PosTag::kAdj));
}

TEST(PosLexicon, LoadsFileAndRejectsBadTags) {
  const auto lex = PosLexicon::load(kData / "translate30.lex");
  EXPECT_EQ(lex.primary("petal"), PosTag::kVerb);
  EXPECT_EQ(lex.primary("the"), PosTag::kOther);
  const auto bad = fs::temp_directory_path() / "zsl_bad.lex";
  write_file(bad, "# comment\nword\tNOUN\tNOUN\nother\tWHAT\tNOUN\n");
  try {
    PosLexicon::load(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(PosLexicon, ShippedLexiconCoversCommonWords) {
  const auto lex = PosLexicon::load(fs::path(ZSL_SOURCE_DIR) / "data" / "pos_lexicon.tsv");
  EXPECT_GT(lex.size(), 10000u);
  EXPECT_TRUE(is_valid_pos("snail", lex));
  EXPECT_FALSE(is_valid_pos("the", lex));
  EXPECT_FALSE(is_valid_pos("of", lex));
}

TEST(ReplaceDict, InjectiveInsertions) {
  ReplaceDict d;
  d.insert("a", "x");
  EXPECT_EQ(*d.find("a"), "x");
  EXPECT_TRUE(d.is_value("x"));
  EXPECT_EQ(d.find("b"), nullptr);
  EXPECT_THROW(d.insert("b", "x"), Error);
  EXPECT_THROW(d.insert("a", "y"), Error);
}

class TranslationFixture : public ::testing::Test {
 protected:
  TranslationFixture()
      : store_(EmbeddingStore::load(kData / "translate30.txt")),
        lexicon_(PosLexicon::load(kData / "translate30.lex")) {}

  Translation run(const Tokens& tokens, std::size_t top_k) const {
    Document doc{"d", tokens, 1};
    return translate_document(doc, meta(1, "animal"), meta(2, "plant"), store_,
                              lexicon_, top_k);
  }

  EmbeddingStore store_;
  PosLexicon lexicon_;
};

const Tokens kFixtureDoc =
    words("the snail crawls slowly of shell kitten ghost snail slimy");

// Frozen from scripts/oracles/analogy_oracle.py, which runs the translation
// algorithm over a brute-force 3CosMul.
TEST_F(TranslationFixture, MatchesOracleWithTop20) {
  const auto t = run(kFixtureDoc, 20);
  EXPECT_EQ(t.document.tokens,
            words("the sprout grows quietly of aster road ghost sprout leafy"));
  const std::vector<std::pair<std::string, std::string>> dict = {
      {"snail", "sprout"}, {"crawls", "grows"},  {"slowly", "quietly"},
      {"shell", "aster"},  {"kitten", "road"},   {"slimy", "leafy"}};
  EXPECT_EQ(t.replacements.entries(), dict);
}

TEST_F(TranslationFixture, MatchesOracleWithTop3) {
  // "shell" exhausts its candidates and is kept; "kitten" loses "sprout" to
  // "snail" and takes the next compatible candidate.
  const auto t = run(kFixtureDoc, 3);
  EXPECT_EQ(t.document.tokens,
            words("the sprout grows quietly of shell aster ghost sprout leafy"));
  EXPECT_EQ(t.replacements.find("shell"), nullptr);
  EXPECT_EQ(*t.replacements.find("kitten"), "aster");
}

TEST_F(TranslationFixture, FunctionWordsOnlyIsIdentity) {
  const Tokens doc = words("the of a the");
  EXPECT_EQ(run(doc, 20).document.tokens, doc);
  EXPECT_TRUE(run(doc, 20).replacements.entries().empty());
}

TEST_F(TranslationFixture, MissingClassLabelIsAnError) {
  Document doc{"d", kFixtureDoc, 1};
  EXPECT_THROW(translate_document(doc, meta(1, "mineral"), meta(2, "plant"),
                                  store_, lexicon_),
               Error);
}

void check_translation_invariants(const Document& source, const Translation& t,
                                  const PosLexicon& lexicon) {
  ASSERT_EQ(t.document.tokens.size(), source.tokens.size());
  std::set<std::string> values;
  for (const auto& [from, to] : t.replacements.entries()) {
    ASSERT_TRUE(values.insert(to).second) << "dictionary not injective";
    const auto* entry = lexicon.find(to);
    ASSERT_NE(entry, nullptr);
    ASSERT_TRUE(entry->has(*lexicon.primary(from))) << from << " -> " << to;
  }
  for (std::size_t i = 0; i < source.tokens.size(); ++i) {
    const auto* mapped = t.replacements.find(source.tokens[i]);
    ASSERT_EQ(t.document.tokens[i], mapped ? *mapped : source.tokens[i]);
    if (!is_valid_pos(source.tokens[i], lexicon)) {
      ASSERT_EQ(mapped, nullptr);
    }
  }
}

TEST(Translation, PropertyInvariantsOnSyntheticWorld) {
  const auto world = testing::make_synthetic_world({});
  const auto store = world.store();
  const auto lexicon = world.pos_lexicon();
  const auto corpus = world.corpus();
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto& doc = corpus.documents[uniform_index(rng, corpus.documents.size())];
    const auto& from = world.classes[static_cast<std::size_t>(*doc.gold_class - 1)];
    const auto& to = world.classes[uniform_index(rng, world.dataset_classes.size())];
    if (from.class_id == to.class_id) continue;
    const std::size_t top_k = 1 + uniform_index(rng, 20);
    const auto t = translate_document(doc, from, to, store, lexicon, top_k);
    check_translation_invariants(doc, t, lexicon);
    const auto again = translate_document(doc, from, to, store, lexicon, top_k);
    ASSERT_EQ(again.document.tokens, t.document.tokens);
  }
}

TEST(Translation, TopicWordsMoveToTheTargetClass) {
  const auto world = testing::make_synthetic_world({});
  const auto store = world.store();
  const auto lexicon = world.pos_lexicon();
  Document doc{"d", {world.topic_word(0, 1), "the", world.topic_word(0, 4)}, 1};
  const auto t = translate_document(doc, world.classes[0], world.classes[3],
                                    store, lexicon);
  EXPECT_EQ(t.document.tokens[0], world.topic_word(3, 1));
  EXPECT_EQ(t.document.tokens[1], "the");
  EXPECT_EQ(t.document.tokens[2], world.topic_word(3, 4));
}

TEST(Translation, SyntheticAnalogiesResolveToTheMatchingRole) {
  const auto world = testing::make_synthetic_world({});
  const auto store = world.store();
  const auto lexicon = world.pos_lexicon();
  std::size_t hits = 0, total = 0;
  for (std::size_t a = 0; a < world.dataset_classes.size(); ++a) {
    for (std::size_t b = 0; b < world.dataset_classes.size(); ++b) {
      if (a == b) continue;
      for (std::size_t r = 0; r < 10; ++r) {
        Document doc{"d", {world.topic_word(a, r)}, world.classes[a].class_id};
        const auto t = translate_document(doc, world.classes[a],
                                          world.classes[b], store, lexicon);
        hits += t.document.tokens[0] == world.topic_word(b, r);
        ++total;
      }
    }
  }
  EXPECT_GE(static_cast<double>(hits) / total, 0.95) << hits << "/" << total;
}

class AugmentCorpus : public ::testing::Test {
 protected:
  AugmentCorpus()
      : world_(testing::make_synthetic_world({})),
        store_(world_.store()),
        lexicon_(world_.pos_lexicon()),
        corpus_(split_train_test(world_.corpus(), 0.7, 5)) {
    partition_.seen = {1, 2, 3, 4};
    partition_.unseen = {5, 6};
  }

  testing::SyntheticWorld world_;
  EmbeddingStore store_;
  PosLexicon lexicon_;
  LabeledCorpus corpus_;
  ClassPartition partition_;
};

TEST_F(AugmentCorpus, CountsBalanceAndSources) {
  AugmentOptions o;
  o.per_unseen = 10;
  const auto docs = generate_augmented_corpus(corpus_, partition_, store_,
                                              lexicon_, o, 9);
  ASSERT_EQ(docs.size(), 20u);
  std::map<ClassId, std::map<ClassId, int>> by_target;
  for (const auto& d : docs) {
    ASSERT_TRUE(partition_.is_unseen(*d.document.gold_class));
    ASSERT_TRUE(partition_.is_seen(d.source_class));
    ASSERT_EQ(corpus_.split[d.source_index], Split::kTrain);
    ASSERT_EQ(corpus_.documents[d.source_index].gold_class, d.source_class);
    ++by_target[*d.document.gold_class][d.source_class];
  }
  for (const auto& [target, sources] : by_target) {
    EXPECT_EQ(sources.size(), 4u);
    for (const auto& [source, n] : sources) {
      EXPECT_GE(n, 2);
      EXPECT_LE(n, 3);
    }
  }
}

TEST_F(AugmentCorpus, DeterministicAcrossWorkerCounts) {
  AugmentOptions o;
  o.per_unseen = 12;
  const auto a = generate_augmented_corpus(corpus_, partition_, store_, lexicon_, o, 4);
  o.workers = 3;
  const auto b = generate_augmented_corpus(corpus_, partition_, store_, lexicon_, o, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].document.tokens, b[i].document.tokens);
    EXPECT_EQ(a[i].document.id, b[i].document.id);
  }
  const auto c = generate_augmented_corpus(corpus_, partition_, store_, lexicon_, o, 5);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    differs |= a[i].source_index != c[i].source_index;
  }
  EXPECT_TRUE(differs);
}

TEST_F(AugmentCorpus, RejectsZeroAndEmptyCorpus) {
  AugmentOptions o;
  o.per_unseen = 0;
  EXPECT_THROW(generate_augmented_corpus(corpus_, partition_, store_, lexicon_, o, 1),
               Error);
  o.per_unseen = 1;
  LabeledCorpus empty;
  empty.classes = corpus_.classes;
  EXPECT_THROW(generate_augmented_corpus(empty, partition_, store_, lexicon_, o, 1),
               Error);
}

TEST_F(AugmentCorpus, SaveLoadRoundTrip) {
  AugmentOptions o;
  o.per_unseen = 3;
  const auto docs = generate_augmented_corpus(corpus_, partition_, store_, lexicon_, o, 2);
  const auto path = fs::temp_directory_path() / "zsl_augmented.tsv";
  save_augmented(docs, path);
  const auto back = load_augmented(path);
  ASSERT_EQ(back.size(), docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    EXPECT_EQ(back[i].document.tokens, docs[i].document.tokens);
    EXPECT_EQ(back[i].document.gold_class, docs[i].document.gold_class);
    EXPECT_EQ(back[i].source_class, docs[i].source_class);
    EXPECT_EQ(back[i].source_index, docs[i].source_index);
  }
}

}  // namespace
}  // namespace zsl
