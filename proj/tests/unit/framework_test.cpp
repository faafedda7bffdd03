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
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "synthetic_world.hpp"
#include "zsl/framework.hpp"

namespace zsl {
namespace {

namespace fs = std::filesystem;

neural::TextCnnConfig tiny(std::size_t input_dim, neural::Head head,
                           std::size_t classes) {
  neural::TextCnnConfig c;
  c.input_dim = input_dim;
  c.filter_sizes = {2, 3};
  c.filters_per_size = 8;
  c.dense_units = {8};
  c.head = head;
  c.output_classes = classes;
  return c;
}

neural::TrainConfig quick(std::size_t epochs = 8) {
  neural::TrainConfig t;
  t.epochs = epochs;
  t.batch_size = 16;
  t.adam.learning_rate = 0.01;
  t.validation_fraction = 0.0;
  return t;
}

// Shared synthetic world with encoders, features and a fixed partition.
class World : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    testing::SyntheticWorldOptions o;
    o.classes = 6;
    o.docs_per_class = 40;
    state_ = new State(o);
  }
  static void TearDownTestSuite() {
    delete state_;
    state_ = nullptr;
  }

  struct State {
    explicit State(const testing::SyntheticWorldOptions& o)
        : world(testing::make_synthetic_world(o)),
          store(world.store()),
          lexicon(world.pos_lexicon()),
          corpus(split_train_test(world.corpus(), 0.7, 3)),
          vocabulary(build_vocabulary(corpus, 1000)),
          hierarchy(world.classes),
          encoder(store, vocabulary, 32) {
      partition.seen = {1, 2, 3, 4};
      partition.unseen = {5, 6};
      KnowledgeGraph::Builder b;
      for (const auto& [rel, x, y] : world.edges) {
        if (rel != "Antonym") b.add_edge(x, y);
      }
      graph = std::move(b).build();
      std::vector<ClassNodeSets> sets;
      for (ClassId c : world.dataset_classes) {
        sets.push_back(class_node_sets(hierarchy.at(c), hierarchy, lexicon, graph));
      }
      features = FeatureTable::build(vocabulary, world.dataset_classes, sets, 2, graph);
      for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
        auto e = encoder.encode(corpus.documents[i]);
        if (corpus.split[i] == Split::kTest) {
          test.push_back(std::move(e));
        } else if (partition.is_seen(*e.gold_class)) {
          train.push_back(std::move(e));
        }
      }
    }

    testing::SyntheticWorld world;
    EmbeddingStore store;
    PosLexicon lexicon;
    LabeledCorpus corpus;
    Vocabulary vocabulary;
    ClassHierarchy hierarchy;
    DocumentEncoder encoder;
    KnowledgeGraph graph;
    FeatureTable features;
    ClassPartition partition;
    std::vector<EncodedDocument> train;
    std::vector<EncodedDocument> test;
  };

  static State* state_;
  State& s() { return *state_; }
};

World::State* World::state_ = nullptr;

TEST(Threshold, MirroredSigmaHandCalculation) {
  // Population standard deviation of {0.9, 0.8, 0.7, 1.1, 1.2, 1.3}.
  const std::vector<double> scores{0.9, 0.8, 0.7};
  const double sigma = std::sqrt(0.28 / 6.0);
  EXPECT_NEAR(sigma, 0.21602468994692867, 1e-15);
  EXPECT_NEAR(mirrored_sigma(scores), sigma, 1e-15);
  EXPECT_DOUBLE_EQ(fit_threshold(scores, 3.0), 0.5);
  EXPECT_NEAR(fit_threshold(scores, 1.0), 0.7839753100530713, 1e-15);
}

TEST(Threshold, DegenerateAndClampBranches) {
  const std::vector<double> ones(5, 1.0);
  EXPECT_EQ(mirrored_sigma(ones), 0.0);
  EXPECT_EQ(fit_threshold(ones, 3.0), kThresholdCeiling);
  // sigma = 0.2 exactly: all scores 0.8.
  const std::vector<double> eights(4, 0.8);
  EXPECT_NEAR(mirrored_sigma(eights), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(fit_threshold(eights, 3.0), 0.5);
  EXPECT_THROW(mirrored_sigma(std::vector<double>{}), Error);
}

TEST(Threshold, PropertyBoundsAndMonotoneInAlpha) {
  Rng rng(81);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> scores(1 + uniform_index(rng, 30));
    for (auto& p : scores) p = uniform_unit(rng);
    double previous = 1.0;
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0}) {
      const double tau = fit_threshold(scores, alpha);
      ASSERT_GE(tau, 0.5);
      ASSERT_LE(tau, kThresholdCeiling);
      ASSERT_LE(tau, previous + 1e-15);
      previous = tau;
    }
    // Mirrored sigma equals the population std of the doubled sample.
    double sq = 0;
    for (double p : scores) sq += 2 * (p - 1) * (p - 1);
    ASSERT_NEAR(mirrored_sigma(scores), std::sqrt(sq / (2.0 * scores.size())), 1e-12);
  }
}

TEST(Phase1Rule, StrictInequality) {
  Phase1Bank bank;
  bank.classes = {1, 2};
  bank.thresholds = {0.6, 0.7};
  bank.models.resize(2);
  EXPECT_FALSE(phase1_accepts(bank, std::vector<double>{0.1, 0.2}));
  EXPECT_TRUE(phase1_accepts(bank, std::vector<double>{0.1, 0.71}));
  EXPECT_FALSE(phase1_accepts(bank, std::vector<double>{0.6, 0.7}));
  EXPECT_TRUE(phase1_accepts(bank, std::vector<double>{0.9, 0.9}));
}

TEST(SelectClass, TiesAndSingleCandidate) {
  const std::vector<ClassId> c{7, 3, 5};
  EXPECT_EQ(select_class(c, std::vector<double>{0.2, 0.9, 0.9}), 1u);
  EXPECT_EQ(select_class(c, std::vector<double>{0.9, 0.9, 0.9}), 1u);
  EXPECT_EQ(select_class(c, std::vector<double>{0.95, 0.9, 0.9}), 0u);
  const std::vector<ClassId> one{4};
  EXPECT_EQ(select_class(one, std::vector<double>{0.0}), 0u);
  EXPECT_THROW(select_class(std::vector<ClassId>{}, std::vector<double>{}), Error);
}

TEST(ZeroShotInputNames, RoundTrip) {
  for (auto input : all_zeroshot_inputs()) {
    EXPECT_EQ(parse_zeroshot_input(to_string(input)), input);
  }
  EXPECT_EQ(to_string(ZeroShotInput::kAll), "v_w;v_c;v_wc");
  EXPECT_EQ(to_string(ZeroShotInput::kWc), "v_wc");
  EXPECT_THROW(parse_zeroshot_input("v_x"), Error);
  EXPECT_TRUE(uses_relation(ZeroShotInput::kCWc));
  EXPECT_FALSE(uses_word(ZeroShotInput::kCWc));
  EXPECT_FALSE(uses_relation(ZeroShotInput::kWC));
}

TEST_F(World, DocumentEncoderFiltersAndTruncates) {
  Document doc{"d", {"alphaka", "unknownword", "the", "alphalo"}, 1};
  const auto e = s().encoder.encode(doc);
  ASSERT_EQ(e.length(), 3u);
  EXPECT_EQ(s().vocabulary.word(e.vocab_ids[1]), "the");
  TokenMatrix m;
  s().encoder.word_matrix(e, m);
  ASSERT_EQ(m.rows(), 3u);
  const auto v = s().store.vector("alphalo");
  for (std::size_t k = 0; k < v.size(); ++k) EXPECT_EQ(m(2, k), v[k]);
  const DocumentEncoder short_encoder(s().store, s().vocabulary, 2);
  EXPECT_EQ(short_encoder.encode(doc).length(), 2u);
  EXPECT_THROW(DocumentEncoder(s().store, s().vocabulary, 0), Error);
}

TEST_F(World, ZeroShotEncoderLayout) {
  const std::size_t d = s().store.dimension();
  const std::size_t r = s().features.dimension();
  Document doc{"d", {"alphaka", "the"}, 1};
  const auto e = s().encoder.encode(doc);
  const std::vector<std::pair<ZeroShotInput, std::size_t>> dims = {
      {ZeroShotInput::kWc, r},
      {ZeroShotInput::kCWc, d + r},
      {ZeroShotInput::kWWc, d + r},
      {ZeroShotInput::kWC, 2 * d},
      {ZeroShotInput::kAll, 2 * d + r}};
  for (const auto& [input, dim] : dims) {
    const ZeroShotEncoder z(s().encoder, s().hierarchy, &s().features, input);
    EXPECT_EQ(z.dimension(), dim) << to_string(input);
  }
  const ZeroShotEncoder all(s().encoder, s().hierarchy, &s().features, ZeroShotInput::kAll);
  TokenMatrix m;
  all.matrix(e, 1, m);
  ASSERT_EQ(m.rows(), 2u);
  const auto w = s().store.vector("alphaka");
  const auto c = s().store.vector("alpha");
  const auto rel = s().features.lookup("alphaka", 1);
  for (std::size_t k = 0; k < d; ++k) {
    EXPECT_EQ(m(0, k), w[k]);
    EXPECT_EQ(m(0, d + k), c[k]);
  }
  for (std::size_t k = 0; k < r; ++k) EXPECT_EQ(m(0, 2 * d + k), rel[k]);
  // The topic word is one hop from its class node.
  EXPECT_EQ(rel[1], 1.0f);
  EXPECT_THROW(all.matrix(e, 42, m), Error);
  EXPECT_THROW(ZeroShotEncoder(s().encoder, s().hierarchy, nullptr, ZeroShotInput::kWc),
               Error);
  EXPECT_NO_THROW(ZeroShotEncoder(s().encoder, s().hierarchy, nullptr, ZeroShotInput::kWC));
}

TEST_F(World, Phase1ModelsPreferTheirOwnClass) {
  Phase1Options o;
  o.cnn = tiny(s().store.dimension(), neural::Head::kSigmoid, 1);
  o.train = quick();
  o.negative_ratio = 2.0;
  o.use_augmented = false;
  auto bank = train_phase1(s().train, s().partition, {}, s().encoder, o, 5);
  ASSERT_EQ(bank.size(), 4u);
  fit_thresholds(bank, s().train, s().encoder, 3.0);
  for (double tau : bank.thresholds) {
    EXPECT_GE(tau, 0.5);
    EXPECT_LE(tau, kThresholdCeiling);
  }
  for (std::size_t i = 0; i < bank.size(); ++i) {
    double own = 0, other = 0;
    std::size_t n_own = 0, n_other = 0;
    for (const auto& d : s().test) {
      if (!s().partition.is_seen(*d.gold_class)) continue;
      const double p = phase1_scores(bank, d, s().encoder)[i];
      if (*d.gold_class == bank.classes[i]) {
        own += p;
        ++n_own;
      } else {
        other += p;
        ++n_other;
      }
    }
    EXPECT_GT(own / n_own, other / n_other + 0.3) << "class " << bank.classes[i];
  }
}

TEST_F(World, Phase1RejectsUnseenTrainingDocuments) {
  Phase1Options o;
  o.cnn = tiny(s().store.dimension(), neural::Head::kSigmoid, 1);
  o.train = quick(1);
  std::vector<EncodedDocument> leaked = s().train;
  leaked.push_back(s().encoder.encode(Document{"x", {"echoka"}, 5}));
  EXPECT_THROW(train_phase1(leaked, s().partition, {}, s().encoder, o, 1), Error);
  o.cnn = tiny(s().store.dimension(), neural::Head::kSoftmax, 2);
  EXPECT_THROW(train_phase1(s().train, s().partition, {}, s().encoder, o, 1), Error);
  o.cnn = tiny(s().store.dimension() + 1, neural::Head::kSigmoid, 1);
  EXPECT_THROW(train_phase1(s().train, s().partition, {}, s().encoder, o, 1), Error);
}

TEST_F(World, Phase1IsDeterministicAcrossWorkers) {
  Phase1Options o;
  o.cnn = tiny(s().store.dimension(), neural::Head::kSigmoid, 1);
  o.train = quick(2);
  const auto a = train_phase1(s().train, s().partition, {}, s().encoder, o, 8);
  o.workers = 3;
  const auto b = train_phase1(s().train, s().partition, {}, s().encoder, o, 8);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.models[i].parameters(), b.models[i].parameters());
  }
}

TEST_F(World, TraditionalClassifierLearnsSeenClasses) {
  TraditionalOptions o;
  o.cnn = tiny(s().store.dimension(), neural::Head::kSoftmax, 4);
  o.train = quick();
  const auto model = train_traditional(s().train, s().partition, s().encoder, o, 2);
  EXPECT_EQ(model.classes, s().partition.seen);
  std::size_t correct = 0, total = 0;
  for (const auto& d : s().test) {
    if (!s().partition.is_seen(*d.gold_class)) continue;
    const auto p = traditional_predict(model, d, s().encoder);
    EXPECT_TRUE(s().partition.is_seen(p.class_id));
    correct += p.class_id == *d.gold_class;
    ++total;
  }
  EXPECT_GT(static_cast<double>(correct) / total, 0.9);

  ClassPartition single;
  single.seen = {1};
  single.unseen = {2, 3, 4, 5, 6};
  std::vector<EncodedDocument> only_one;
  for (const auto& d : s().train) {
    if (*d.gold_class == 1) only_one.push_back(d);
  }
  EXPECT_THROW(train_traditional(only_one, single, s().encoder, o, 2), Error);
}

TEST_F(World, ZeroShotRejectsZeroNegativeRatio) {
  const ZeroShotEncoder z(s().encoder, s().hierarchy, &s().features, ZeroShotInput::kAll);
  ZeroShotOptions o;
  o.cnn = tiny(z.dimension(), neural::Head::kSigmoid, 1);
  o.train = quick(1);
  o.negative_ratio = 0;
  EXPECT_THROW(train_zeroshot(s().train, s().partition, z, o, 1), Error);
  o.negative_ratio = 1;
  o.cnn = tiny(z.dimension() + 3, neural::Head::kSigmoid, 1);
  EXPECT_THROW(train_zeroshot(s().train, s().partition, z, o, 1), Error);
}

TEST_F(World, ZeroShotTransfersToUnseenClasses) {
  const ZeroShotEncoder z(s().encoder, s().hierarchy, &s().features, ZeroShotInput::kAll);
  ZeroShotOptions o;
  o.cnn = tiny(z.dimension(), neural::Head::kSigmoid, 1);
  o.train = quick(10);
  const auto model = train_zeroshot(s().train, s().partition, z, o, 4);
  std::size_t correct = 0, total = 0;
  for (const auto& d : s().test) {
    if (!s().partition.is_unseen(*d.gold_class)) continue;
    const auto p = zeroshot_predict(model, d, s().partition.unseen, z);
    EXPECT_TRUE(s().partition.is_unseen(p.class_id));
    correct += p.class_id == *d.gold_class;
    ++total;
  }
  EXPECT_GT(static_cast<double>(correct) / total, 0.8);
  EXPECT_THROW(zeroshot_predict(model, s().test[0], std::vector<ClassId>{}, z), Error);
}

TEST_F(World, UntrainedZeroShotModelIsNearChance) {
  // Seven balanced unseen classes; a random model has no signal to exploit.
  testing::SyntheticWorldOptions wo;
  wo.classes = 7;
  wo.docs_per_class = 150;
  wo.seed = 19;
  const auto world = testing::make_synthetic_world(wo);
  const auto store = world.store();
  const auto corpus = world.corpus();
  const auto vocabulary = build_vocabulary(corpus, 1000);
  const ClassHierarchy hierarchy(world.classes);
  const DocumentEncoder encoder(store, vocabulary, 32);
  const ZeroShotEncoder z(encoder, hierarchy, nullptr, ZeroShotInput::kWC);
  std::size_t correct = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    ZeroShotModel model;
    model.input = ZeroShotInput::kWC;
    model.model = Model(tiny(z.dimension(), neural::Head::kSigmoid, 1), seed);
    for (const auto& doc : corpus.documents) {
      const auto e = encoder.encode(doc);
      correct += zeroshot_predict(model, e, world.dataset_classes, z).class_id == *doc.gold_class;
    }
  }
  const double accuracy = static_cast<double>(correct) / (3.0 * corpus.documents.size());
  EXPECT_NEAR(accuracy, 1.0 / 7.0, 0.05);
}

class TwoPhase : public World {
 protected:
  static void SetUpTestSuite() {
    World::SetUpTestSuite();
    auto& st = *state_;
    models_ = new TwoPhaseModels;
    Phase1Options p1;
    p1.cnn = tiny(st.store.dimension(), neural::Head::kSigmoid, 1);
    p1.train = quick();
    p1.use_augmented = false;
    models_->bank = train_phase1(st.train, st.partition, {}, st.encoder, p1, 1);
    fit_thresholds(models_->bank, st.train, st.encoder, 3.0);
    TraditionalOptions tr;
    tr.cnn = tiny(st.store.dimension(), neural::Head::kSoftmax, 4);
    tr.train = quick();
    models_->traditional = train_traditional(st.train, st.partition, st.encoder, tr, 2);
    zs_ = new ZeroShotEncoder(st.encoder, st.hierarchy, &st.features, ZeroShotInput::kAll);
    ZeroShotOptions zo;
    zo.cnn = tiny(zs_->dimension(), neural::Head::kSigmoid, 1);
    zo.train = quick();
    models_->zeroshot = train_zeroshot(st.train, st.partition, *zs_, zo, 3);
  }
  static void TearDownTestSuite() {
    delete zs_;
    delete models_;
    World::TearDownTestSuite();
  }

  static TwoPhaseModels* models_;
  static ZeroShotEncoder* zs_;
};

TwoPhaseModels* TwoPhase::models_ = nullptr;
ZeroShotEncoder* TwoPhase::zs_ = nullptr;

TEST_F(TwoPhase, RoutingInvariant) {
  const auto predictions = two_phase_classify(*models_, s().partition, s().test,
                                              s().encoder, *zs_, 2);
  ASSERT_EQ(predictions.size(), s().test.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& p = predictions[i];
    EXPECT_EQ(p.id, s().test[i].id);
    EXPECT_EQ(p.coarse_seen, phase1_accepts(models_->bank, p.phase1_scores));
    if (p.coarse_seen) {
      EXPECT_TRUE(s().partition.is_seen(p.predicted));
    } else {
      EXPECT_TRUE(s().partition.is_unseen(p.predicted));
    }
    const auto single = two_phase_classify(*models_, s().partition, s().test[i],
                                           s().encoder, *zs_);
    EXPECT_EQ(single.predicted, p.predicted);
  }
}

TEST_F(TwoPhase, CheckpointRoundTripPreservesPredictions) {
  const auto dir = fs::temp_directory_path() / "zsl_checkpoint_test";
  fs::remove_all(dir);
  save_checkpoint(dir, *models_, {{"seed", 1}});
  nlohmann::json manifest;
  const auto back = load_checkpoint(dir, &manifest);
  EXPECT_EQ(manifest.at("seed"), 1);
  EXPECT_EQ(back.bank.classes, models_->bank.classes);
  EXPECT_EQ(back.bank.thresholds, models_->bank.thresholds);
  EXPECT_EQ(back.traditional.classes, models_->traditional.classes);
  EXPECT_EQ(back.zeroshot.input, models_->zeroshot.input);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto a = two_phase_classify(*models_, s().partition, s().test[i], s().encoder, *zs_);
    const auto b = two_phase_classify(back, s().partition, s().test[i], s().encoder, *zs_);
    EXPECT_EQ(a.predicted, b.predicted);
    EXPECT_EQ(a.phase1_scores, b.phase1_scores);
  }
  write_file(dir / "phase1" / "thresholds", "1\tnot-a-number\n");
  EXPECT_THROW(load_checkpoint(dir), ParseError);
}

}  // namespace
}  // namespace zsl
