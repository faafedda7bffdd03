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

#include "zsl/framework.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include <spdlog/spdlog.h>

namespace zsl {

// --- Encoding -------------------------------------------------------------------------

DocumentEncoder::DocumentEncoder(const EmbeddingStore& store,
                                 const Vocabulary& vocabulary,
                                 std::size_t max_length)
    : store_(store), vocabulary_(vocabulary), max_length_(max_length) {
  if (max_length_ == 0) throw Error("DocumentEncoder: max_length must be >= 1");
  vocab_to_row_.reserve(vocabulary.size());
  for (const auto& word : vocabulary.words()) {
    auto row = store.index(word);
    vocab_to_row_.push_back(row ? std::optional<std::uint32_t>(*row)
                                : std::nullopt);
  }
}

EncodedDocument DocumentEncoder::encode(const Document& document) const {
  EncodedDocument out;
  out.id = document.id;
  out.gold_class = document.gold_class;
  for (const auto& token : document.tokens) {
    if (out.vocab_ids.size() == max_length_) break;
    auto id = vocabulary_.index(token);
    if (!id || !vocab_to_row_[*id]) continue;
    out.vocab_ids.push_back(static_cast<std::uint32_t>(*id));
    out.store_rows.push_back(*vocab_to_row_[*id]);
  }
  return out;
}

std::vector<EncodedDocument> DocumentEncoder::encode(
    std::span<const Document> documents) const {
  std::vector<EncodedDocument> out;
  out.reserve(documents.size());
  for (const auto& d : documents) out.push_back(encode(d));
  return out;
}

void DocumentEncoder::word_matrix(const EncodedDocument& document,
                                  TokenMatrix& out) const {
  const std::size_t d = store_.dimension();
  out.assign(document.length(), d);
  for (std::size_t t = 0; t < document.length(); ++t) {
    const auto v = store_.vector(document.store_rows[t]);
    std::copy(v.begin(), v.end(), out.row(t).begin());
  }
}

std::string to_string(ZeroShotInput input) {
  switch (input) {
    case ZeroShotInput::kWc:
      return "v_wc";
    case ZeroShotInput::kCWc:
      return "v_c;v_wc";
    case ZeroShotInput::kWWc:
      return "v_w;v_wc";
    case ZeroShotInput::kWC:
      return "v_w;v_c";
    case ZeroShotInput::kAll:
      return "v_w;v_c;v_wc";
  }
  return "v_w;v_c;v_wc";
}

ZeroShotInput parse_zeroshot_input(const std::string& name) {
  for (ZeroShotInput input : all_zeroshot_inputs()) {
    if (to_string(input) == name) return input;
  }
  throw Error("unknown zero-shot input combination '" + name + "'");
}

const std::vector<ZeroShotInput>& all_zeroshot_inputs() {
  static const std::vector<ZeroShotInput> kAll = {
      ZeroShotInput::kWc, ZeroShotInput::kCWc, ZeroShotInput::kWWc,
      ZeroShotInput::kWC, ZeroShotInput::kAll};
  return kAll;
}

bool uses_word(ZeroShotInput input) {
  return input == ZeroShotInput::kWWc || input == ZeroShotInput::kWC ||
         input == ZeroShotInput::kAll;
}
bool uses_class(ZeroShotInput input) {
  return input == ZeroShotInput::kCWc || input == ZeroShotInput::kWC ||
         input == ZeroShotInput::kAll;
}
bool uses_relation(ZeroShotInput input) {
  return input != ZeroShotInput::kWC;
}

ZeroShotEncoder::ZeroShotEncoder(const DocumentEncoder& documents,
                                 const ClassHierarchy& hierarchy,
                                 const FeatureTable* features,
                                 ZeroShotInput input)
    : documents_(documents),
      hierarchy_(hierarchy),
      features_(features),
      input_(input) {
  const std::size_t d = documents.store().dimension();
  dimension_ = 0;
  if (uses_word(input)) dimension_ += d;
  if (uses_class(input)) dimension_ += d;
  if (uses_relation(input)) {
    if (!features_) {
      throw Error("zero-shot input " + to_string(input) +
                  " needs a relationship feature table");
    }
    if (features_->words() != documents.vocabulary().words()) {
      throw Error("feature table was built for a different vocabulary");
    }
    dimension_ += features_->dimension();
  }
}

void ZeroShotEncoder::matrix(const EncodedDocument& document, ClassId class_id,
                             TokenMatrix& out) const {
  const EmbeddingStore& store = documents_.store();
  std::span<const float> class_vector;
  if (uses_class(input_)) {
    class_vector = store.vector(hierarchy_.at(class_id).one_word_label);
  }
  if (uses_relation(input_)) {
    const auto& classes = features_->classes();
    if (std::find(classes.begin(), classes.end(), class_id) == classes.end()) {
      throw Error("no relationship features for class " +
                  std::to_string(class_id));
    }
  }
  out.assign(document.length(), dimension_);
  for (std::size_t t = 0; t < document.length(); ++t) {
    float* row = out.row(t).data();
    if (uses_word(input_)) {
      const auto v = store.vector(document.store_rows[t]);
      row = std::copy(v.begin(), v.end(), row);
    }
    if (uses_class(input_)) {
      row = std::copy(class_vector.begin(), class_vector.end(), row);
    }
    if (uses_relation(input_)) {
      const auto v = features_->lookup(document.vocab_ids[t], class_id);
      std::copy(v.begin(), v.end(), row);
    }
  }
}

// --- Defaults ---------------------------------------------------------------------------

neural::TextCnnConfig default_phase1_cnn(std::size_t input_dim) {
  neural::TextCnnConfig c;
  c.input_dim = input_dim;
  c.filter_sizes = {3, 4, 5};
  c.filters_per_size = 400;
  c.dense_units = {300};
  c.head = neural::Head::kSigmoid;
  c.output_classes = 1;
  return c;
}

neural::TextCnnConfig default_traditional_cnn(std::size_t input_dim,
                                              std::size_t classes) {
  neural::TextCnnConfig c;
  c.input_dim = input_dim;
  c.filter_sizes = {2, 4, 8};
  c.filters_per_size = 600;
  c.dense_units = {400, 100};
  c.head = neural::Head::kSoftmax;
  c.output_classes = classes;
  return c;
}

neural::TextCnnConfig default_zeroshot_cnn(std::size_t input_dim) {
  neural::TextCnnConfig c = default_traditional_cnn(input_dim, 2);
  c.head = neural::Head::kSigmoid;
  c.output_classes = 1;
  return c;
}

namespace {

// (document, target) pairs backed by a matrix builder.
class PairSource : public neural::SampleSource<float> {
 public:
  struct Pair {
    const EncodedDocument* document;
    ClassId class_id;  // class used to build the input, if any
    std::size_t target;
  };
  using Builder =
      std::function<void(const EncodedDocument&, ClassId, TokenMatrix&)>;

  PairSource(std::vector<Pair> pairs, Builder builder)
      : pairs_(std::move(pairs)), builder_(std::move(builder)) {}

  std::size_t size() const override { return pairs_.size(); }
  void input(std::size_t i, TokenMatrix& out) const override {
    builder_(*pairs_[i].document, pairs_[i].class_id, out);
  }
  std::size_t target(std::size_t i) const override { return pairs_[i].target; }

 private:
  std::vector<Pair> pairs_;
  Builder builder_;
};

// Uniform sample of `count` items without replacement, in original order.
template <typename T>
std::vector<T> sample_without_replacement(const std::vector<T>& items,
                                          std::size_t count, Rng& rng) {
  if (count >= items.size()) return items;
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Partial Fisher-Yates over the first `count` slots.
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(order[i], order[i + uniform_index(rng, order.size() - i)]);
  }
  order.resize(count);
  std::sort(order.begin(), order.end());
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i : order) out.push_back(items[i]);
  return out;
}

void check_input_dim(const neural::TextCnnConfig& cnn, std::size_t dim,
                     const std::string& what) {
  if (cnn.input_dim != dim) {
    throw Error(what + ": network input_dim " + std::to_string(cnn.input_dim) +
                " does not match feature dimension " + std::to_string(dim));
  }
}

}  // namespace

// --- Phase 1 ----------------------------------------------------------------------------

double mirrored_sigma(std::span<const double> positive_scores) {
  if (positive_scores.empty()) {
    throw Error("threshold fit: no positive scores");
  }
  // Each score p and its mirror 2 - p sit at the same distance from 1.
  double sum = 0.0;
  for (double p : positive_scores) sum += (1.0 - p) * (1.0 - p);
  return std::sqrt(sum / static_cast<double>(positive_scores.size()));
}

double fit_threshold(std::span<const double> positive_scores, double alpha) {
  const double sigma = mirrored_sigma(positive_scores);
  return std::min(kThresholdCeiling, std::max(0.5, 1.0 - alpha * sigma));
}

Phase1Bank train_phase1(std::span<const EncodedDocument> train,
                        const ClassPartition& partition,
                        std::span<const EncodedDocument> augmented,
                        const DocumentEncoder& encoder,
                        const Phase1Options& options, std::uint64_t seed) {
  check_input_dim(options.cnn, encoder.store().dimension(), "phase 1");
  if (options.cnn.head != neural::Head::kSigmoid) {
    throw Error("phase 1 models need a sigmoid head");
  }
  if (options.negative_ratio < 0.0) {
    throw Error("phase 1: negative_ratio must be >= 0");
  }
  std::map<ClassId, std::vector<const EncodedDocument*>> by_class;
  for (const auto& d : train) {
    if (!d.gold_class) continue;
    if (partition.is_unseen(*d.gold_class)) {
      throw Error("phase 1: training document " + d.id +
                  " belongs to an unseen class");
    }
    if (partition.is_seen(*d.gold_class)) by_class[*d.gold_class].push_back(&d);
  }

  Phase1Bank bank;
  bank.classes = partition.seen;
  bank.models.resize(bank.classes.size());
  bank.thresholds.assign(bank.classes.size(), 0.5);
  for (ClassId c : bank.classes) {
    if (by_class[c].empty()) {
      throw Error("phase 1: seen class " + std::to_string(c) +
                  " has no training documents");
    }
  }

  auto builder = [&encoder](const EncodedDocument& d, ClassId,
                            TokenMatrix& out) { encoder.word_matrix(d, out); };

  parallel_for(bank.classes.size(), options.workers, [&](std::size_t i) {
    const ClassId c = bank.classes[i];
    const auto& positives = by_class.at(c);
    std::vector<const EncodedDocument*> negatives;
    for (const auto& [other, docs] : by_class) {
      if (other != c) negatives.insert(negatives.end(), docs.begin(), docs.end());
    }
    if (options.use_augmented) {
      for (const auto& d : augmented) negatives.push_back(&d);
    }
    if (options.negative_ratio > 0.0) {
      const auto keep = static_cast<std::size_t>(std::llround(
          options.negative_ratio * static_cast<double>(positives.size())));
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(c), 0}));
      negatives = sample_without_replacement(negatives, keep, rng);
    }
    std::vector<PairSource::Pair> pairs;
    pairs.reserve(positives.size() + negatives.size());
    for (const auto* d : positives) pairs.push_back({d, c, 1});
    for (const auto* d : negatives) pairs.push_back({d, c, 0});
    PairSource source(std::move(pairs), builder);

    Model model(options.cnn,
                derive_seed(seed, {static_cast<std::uint64_t>(c), 1}));
    neural::TrainConfig train_config = options.train;
    train_config.seed = derive_seed(seed, {static_cast<std::uint64_t>(c), 2});
    try {
      neural::train(model, source, train_config);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.epoch(), "phase 1 model for class " +
                                           std::to_string(c) + ": " + e.what());
    }
    spdlog::debug("phase 1: class {} trained on {} positives, {} negatives", c,
                  positives.size(), negatives.size());
    bank.models[i] = std::move(model);
  });
  return bank;
}

std::vector<double> phase1_scores(const Phase1Bank& bank,
                                  const EncodedDocument& document,
                                  const DocumentEncoder& encoder) {
  TokenMatrix input;
  encoder.word_matrix(document, input);
  std::vector<double> scores(bank.size());
  for (std::size_t i = 0; i < bank.size(); ++i) {
    scores[i] = bank.models[i].predict(input)[0];
  }
  return scores;
}

std::vector<std::vector<double>> positive_scores(
    const Phase1Bank& bank, std::span<const EncodedDocument> train,
    const DocumentEncoder& encoder, std::size_t workers) {
  std::vector<std::vector<double>> scores(bank.size());
  parallel_for(bank.size(), workers, [&](std::size_t i) {
    TokenMatrix input;
    for (const auto& d : train) {
      if (d.gold_class != bank.classes[i]) continue;
      encoder.word_matrix(d, input);
      scores[i].push_back(bank.models[i].predict(input)[0]);
    }
  });
  return scores;
}

void fit_thresholds(Phase1Bank& bank, std::span<const EncodedDocument> train,
                    const DocumentEncoder& encoder, double alpha,
                    std::size_t workers) {
  const auto scores = positive_scores(bank, train, encoder, workers);
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (scores[i].empty()) {
      throw Error("threshold fit: class " + std::to_string(bank.classes[i]) +
                  " has no positive training documents");
    }
    bank.thresholds[i] = fit_threshold(scores[i], alpha);
  }
}

bool phase1_accepts(const Phase1Bank& bank, std::span<const double> scores) {
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (scores[i] > bank.thresholds[i]) return true;
  }
  return false;
}

Phase1Decision phase1_predict(const Phase1Bank& bank,
                              const EncodedDocument& document,
                              const DocumentEncoder& encoder) {
  Phase1Decision decision;
  decision.scores = phase1_scores(bank, document, encoder);
  decision.seen = phase1_accepts(bank, decision.scores);
  return decision;
}

// --- Phase 2 ----------------------------------------------------------------------------

TraditionalModel train_traditional(std::span<const EncodedDocument> train,
                                   const ClassPartition& partition,
                                   const DocumentEncoder& encoder,
                                   const TraditionalOptions& options,
                                   std::uint64_t seed) {
  if (partition.seen.size() < 2) {
    throw Error("traditional classifier needs at least two seen classes");
  }
  check_input_dim(options.cnn, encoder.store().dimension(), "traditional");
  if (options.cnn.head != neural::Head::kSoftmax ||
      options.cnn.output_classes != partition.seen.size()) {
    throw Error("traditional classifier needs a softmax head over " +
                std::to_string(partition.seen.size()) + " classes");
  }
  std::vector<PairSource::Pair> pairs;
  for (const auto& d : train) {
    if (!d.gold_class || !partition.is_seen(*d.gold_class)) continue;
    const auto it = std::lower_bound(partition.seen.begin(),
                                     partition.seen.end(), *d.gold_class);
    pairs.push_back({&d, *d.gold_class,
                     static_cast<std::size_t>(it - partition.seen.begin())});
  }
  if (pairs.empty()) throw Error("traditional classifier: no training data");
  PairSource source(std::move(pairs),
                    [&encoder](const EncodedDocument& d, ClassId,
                               TokenMatrix& out) { encoder.word_matrix(d, out); });
  TraditionalModel result{partition.seen,
                          Model(options.cnn, derive_seed(seed, {1}))};
  neural::TrainConfig train_config = options.train;
  train_config.seed = derive_seed(seed, {2});
  neural::train(result.model, source, train_config);
  return result;
}

ClassScore traditional_predict(const TraditionalModel& model,
                               const EncodedDocument& document,
                               const DocumentEncoder& encoder) {
  TokenMatrix input;
  encoder.word_matrix(document, input);
  const auto probs = model.model.predict(input);
  std::vector<double> scores(probs.begin(), probs.end());
  const std::size_t best = select_class(model.classes, scores);
  return {model.classes[best], scores[best]};
}

ZeroShotModel train_zeroshot(std::span<const EncodedDocument> train,
                             const ClassPartition& partition,
                             const ZeroShotEncoder& encoder,
                             const ZeroShotOptions& options,
                             std::uint64_t seed) {
  if (options.negative_ratio == 0) {
    throw Error("zero-shot training needs negative_ratio >= 1");
  }
  if (partition.seen.size() < 2) {
    throw Error("zero-shot training needs at least two seen classes");
  }
  check_input_dim(options.cnn, encoder.dimension(), "zero-shot");
  if (options.cnn.head != neural::Head::kSigmoid) {
    throw Error("zero-shot model needs a sigmoid head");
  }
  Rng rng(derive_seed(seed, {0}));
  std::vector<PairSource::Pair> pairs;
  for (const auto& d : train) {
    if (!d.gold_class || !partition.is_seen(*d.gold_class)) continue;
    const ClassId gold = *d.gold_class;
    pairs.push_back({&d, gold, 1});
    std::vector<ClassId> others;
    for (ClassId c : partition.seen) {
      if (c != gold) others.push_back(c);
    }
    if (options.negative_ratio <= others.size()) {
      for (ClassId c :
           sample_without_replacement(others, options.negative_ratio, rng)) {
        pairs.push_back({&d, c, 0});
      }
    } else {
      for (std::size_t k = 0; k < options.negative_ratio; ++k) {
        pairs.push_back({&d, others[uniform_index(rng, others.size())], 0});
      }
    }
  }
  if (pairs.empty()) throw Error("zero-shot classifier: no training data");
  PairSource source(std::move(pairs),
                    [&encoder](const EncodedDocument& d, ClassId c,
                               TokenMatrix& out) { encoder.matrix(d, c, out); });
  ZeroShotModel result{encoder.input(),
                       Model(options.cnn, derive_seed(seed, {1}))};
  neural::TrainConfig train_config = options.train;
  train_config.seed = derive_seed(seed, {2});
  neural::train(result.model, source, train_config);
  return result;
}

std::vector<double> zeroshot_scores(const ZeroShotModel& model,
                                    const EncodedDocument& document,
                                    std::span<const ClassId> candidates,
                                    const ZeroShotEncoder& encoder) {
  if (encoder.input() != model.input) {
    throw Error("zero-shot encoder input " + to_string(encoder.input()) +
                " does not match model input " + to_string(model.input));
  }
  TokenMatrix input;
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (ClassId c : candidates) {
    encoder.matrix(document, c, input);
    scores.push_back(model.model.predict(input)[0]);
  }
  return scores;
}

std::size_t select_class(std::span<const ClassId> candidates,
                         std::span<const double> scores) {
  if (candidates.empty()) throw Error("class selection: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (scores[i] > scores[best] ||
        (scores[i] == scores[best] && candidates[i] < candidates[best])) {
      best = i;
    }
  }
  return best;
}

ClassScore zeroshot_predict(const ZeroShotModel& model,
                            const EncodedDocument& document,
                            std::span<const ClassId> candidates,
                            const ZeroShotEncoder& encoder) {
  if (candidates.empty()) throw Error("zero-shot prediction: no candidates");
  const auto scores = zeroshot_scores(model, document, candidates, encoder);
  const std::size_t best = select_class(candidates, scores);
  return {candidates[best], scores[best]};
}

// --- End to end ---------------------------------------------------------------------------

Prediction two_phase_classify(const TwoPhaseModels& models,
                              const ClassPartition& partition,
                              const EncodedDocument& document,
                              const DocumentEncoder& encoder,
                              const ZeroShotEncoder& zeroshot_encoder) {
  Prediction p;
  p.id = document.id;
  const auto decision = phase1_predict(models.bank, document, encoder);
  p.coarse_seen = decision.seen;
  p.phase1_scores = decision.scores;
  const ClassScore chosen =
      decision.seen
          ? traditional_predict(models.traditional, document, encoder)
          : zeroshot_predict(models.zeroshot, document, partition.unseen,
                             zeroshot_encoder);
  p.predicted = chosen.class_id;
  p.phase2_confidence = chosen.confidence;
  return p;
}

std::vector<Prediction> two_phase_classify(
    const TwoPhaseModels& models, const ClassPartition& partition,
    std::span<const EncodedDocument> documents, const DocumentEncoder& encoder,
    const ZeroShotEncoder& zeroshot_encoder, std::size_t workers) {
  std::vector<Prediction> out(documents.size());
  parallel_for(documents.size(), workers, [&](std::size_t i) {
    out[i] = two_phase_classify(models, partition, documents[i], encoder,
                                zeroshot_encoder);
  });
  return out;
}

}  // namespace zsl
