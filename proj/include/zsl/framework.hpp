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

// The two-phase classifier. Phase 1 is a bank of per-seen-class binary CNNs
// with adaptive rejection thresholds; Phase 2 routes accepted documents to a
// softmax classifier over the seen classes and rejected ones to a binary
// zero-shot model scoring (document, class) pairs.

#ifndef ZSL_FRAMEWORK_HPP_
#define ZSL_FRAMEWORK_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zsl/augment.hpp"
#include "zsl/corpus.hpp"
#include "zsl/embed.hpp"
#include "zsl/neural.hpp"
#include "zsl/semgraph.hpp"

namespace zsl {

using Model = neural::TextCnn<float>;
using TokenMatrix = neural::Matrix<float>;

// Token positions kept for the CNNs: in-vocabulary words that also have an
// embedding, truncated to a maximum length.
struct EncodedDocument {
  std::string id;
  std::optional<ClassId> gold_class;
  std::vector<std::uint32_t> vocab_ids;
  std::vector<std::uint32_t> store_rows;

  std::size_t length() const { return vocab_ids.size(); }
};

class DocumentEncoder {
 public:
  DocumentEncoder(const EmbeddingStore& store, const Vocabulary& vocabulary,
                  std::size_t max_length);

  EncodedDocument encode(const Document& document) const;
  std::vector<EncodedDocument> encode(std::span<const Document> documents) const;

  // One v_w row per kept token.
  void word_matrix(const EncodedDocument& document, TokenMatrix& out) const;

  const EmbeddingStore& store() const { return store_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::size_t max_length() const { return max_length_; }

 private:
  const EmbeddingStore& store_;
  const Vocabulary& vocabulary_;
  std::size_t max_length_;
  std::vector<std::optional<std::uint32_t>> vocab_to_row_;
};

// Per-token input of the zero-shot classifier.
enum class ZeroShotInput { kWc, kCWc, kWWc, kWC, kAll };

std::string to_string(ZeroShotInput input);
ZeroShotInput parse_zeroshot_input(const std::string& name);
const std::vector<ZeroShotInput>& all_zeroshot_inputs();

bool uses_word(ZeroShotInput input);
bool uses_class(ZeroShotInput input);
bool uses_relation(ZeroShotInput input);

// Builds [v_w; v_c; v_{w,c}] rows (restricted to the selected parts).
class ZeroShotEncoder {
 public:
  // The class vector v_c is the embedding of the class's one-word label.
  // `features` may be null when the input has no v_{w,c} part.
  ZeroShotEncoder(const DocumentEncoder& documents,
                  const ClassHierarchy& hierarchy, const FeatureTable* features,
                  ZeroShotInput input);

  ZeroShotInput input() const { return input_; }
  std::size_t dimension() const { return dimension_; }
  void matrix(const EncodedDocument& document, ClassId class_id,
              TokenMatrix& out) const;

 private:
  const DocumentEncoder& documents_;
  const ClassHierarchy& hierarchy_;
  const FeatureTable* features_;
  ZeroShotInput input_;
  std::size_t dimension_;
};

// --- Configuration ---------------------------------------------------------------

neural::TextCnnConfig default_phase1_cnn(std::size_t input_dim);
neural::TextCnnConfig default_traditional_cnn(std::size_t input_dim,
                                              std::size_t classes);
neural::TextCnnConfig default_zeroshot_cnn(std::size_t input_dim);

struct Phase1Options {
  neural::TextCnnConfig cnn = default_phase1_cnn(200);
  neural::TrainConfig train;
  // Negatives kept per positive; 0 keeps every negative.
  double negative_ratio = 4.0;
  bool use_augmented = true;
  double alpha = 3.0;
  std::size_t workers = 1;
};

struct TraditionalOptions {
  neural::TextCnnConfig cnn = default_traditional_cnn(200, 2);
  neural::TrainConfig train;
};

struct ZeroShotOptions {
  neural::TextCnnConfig cnn = default_zeroshot_cnn(430);
  neural::TrainConfig train;
  std::size_t negative_ratio = 1;
};

// --- Phase 1 ------------------------------------------------------------------------

// Upper clamp of a threshold whose positive scores have zero spread.
inline constexpr double kThresholdCeiling = 1.0 - 1e-6;

// Spread of positive scores mirrored around 1: the sample {p_i} together with
// {2 - p_i} has mean 1, and sigma is its population standard deviation.
double mirrored_sigma(std::span<const double> positive_scores);

// max(0.5, 1 - alpha * sigma), capped at kThresholdCeiling.
double fit_threshold(std::span<const double> positive_scores, double alpha);

struct Phase1Bank {
  std::vector<ClassId> classes;  // seen classes, ascending
  std::vector<Model> models;
  std::vector<double> thresholds;

  std::size_t size() const { return classes.size(); }
};

// Trains one binary model per seen class. Positives are the class's training
// documents; negatives come from the other seen classes and, when enabled,
// the augmented documents. Augmented documents are never positives.
Phase1Bank train_phase1(std::span<const EncodedDocument> train,
                        const ClassPartition& partition,
                        std::span<const EncodedDocument> augmented,
                        const DocumentEncoder& encoder,
                        const Phase1Options& options, std::uint64_t seed);

// Scores of the bank's models on their own positive training documents,
// indexed like bank.classes.
std::vector<std::vector<double>> positive_scores(
    const Phase1Bank& bank, std::span<const EncodedDocument> train,
    const DocumentEncoder& encoder, std::size_t workers = 1);

void fit_thresholds(Phase1Bank& bank, std::span<const EncodedDocument> train,
                    const DocumentEncoder& encoder, double alpha,
                    std::size_t workers = 1);

struct Phase1Decision {
  bool seen = false;
  std::vector<double> scores;  // indexed like bank.classes
};

std::vector<double> phase1_scores(const Phase1Bank& bank,
                                  const EncodedDocument& document,
                                  const DocumentEncoder& encoder);

// Seen iff some score strictly exceeds its class threshold.
bool phase1_accepts(const Phase1Bank& bank, std::span<const double> scores);

Phase1Decision phase1_predict(const Phase1Bank& bank,
                              const EncodedDocument& document,
                              const DocumentEncoder& encoder);

// --- Phase 2 ------------------------------------------------------------------------

struct TraditionalModel {
  std::vector<ClassId> classes;  // seen classes, ascending; softmax order
  Model model;
};

struct ZeroShotModel {
  ZeroShotInput input = ZeroShotInput::kAll;
  Model model;
};

TraditionalModel train_traditional(std::span<const EncodedDocument> train,
                                   const ClassPartition& partition,
                                   const DocumentEncoder& encoder,
                                   const TraditionalOptions& options,
                                   std::uint64_t seed);

struct ClassScore {
  ClassId class_id = 0;
  double confidence = 0.0;
};

// Argmax of the softmax; ties go to the lowest class id.
ClassScore traditional_predict(const TraditionalModel& model,
                               const EncodedDocument& document,
                               const DocumentEncoder& encoder);

ZeroShotModel train_zeroshot(std::span<const EncodedDocument> train,
                             const ClassPartition& partition,
                             const ZeroShotEncoder& encoder,
                             const ZeroShotOptions& options,
                             std::uint64_t seed);

// Confidence of each candidate, in the order given.
std::vector<double> zeroshot_scores(const ZeroShotModel& model,
                                    const EncodedDocument& document,
                                    std::span<const ClassId> candidates,
                                    const ZeroShotEncoder& encoder);

// Index of the largest score; ties go to the smallest class id.
std::size_t select_class(std::span<const ClassId> candidates,
                         std::span<const double> scores);

// Argmax over candidates; ties go to the lowest class id. Throws on an empty
// candidate set.
ClassScore zeroshot_predict(const ZeroShotModel& model,
                            const EncodedDocument& document,
                            std::span<const ClassId> candidates,
                            const ZeroShotEncoder& encoder);

// --- End to end ------------------------------------------------------------------------

struct Prediction {
  std::string id;
  bool coarse_seen = false;
  ClassId predicted = 0;
  std::vector<double> phase1_scores;
  double phase2_confidence = 0.0;
};

struct TwoPhaseModels {
  Phase1Bank bank;
  TraditionalModel traditional;
  ZeroShotModel zeroshot;
};

Prediction two_phase_classify(const TwoPhaseModels& models,
                              const ClassPartition& partition,
                              const EncodedDocument& document,
                              const DocumentEncoder& encoder,
                              const ZeroShotEncoder& zeroshot_encoder);

std::vector<Prediction> two_phase_classify(
    const TwoPhaseModels& models, const ClassPartition& partition,
    std::span<const EncodedDocument> documents, const DocumentEncoder& encoder,
    const ZeroShotEncoder& zeroshot_encoder, std::size_t workers = 1);

// --- Checkpoints ------------------------------------------------------------------------

// phase1/<class_id>.model, phase1/thresholds, phase2/traditional.model,
// phase2/zeroshot.model and manifest.json.
void save_checkpoint(const std::filesystem::path& dir,
                     const TwoPhaseModels& models,
                     const nlohmann::json& manifest);

TwoPhaseModels load_checkpoint(const std::filesystem::path& dir,
                               nlohmann::json* manifest = nullptr);

void save_thresholds(const std::filesystem::path& path, const Phase1Bank& bank);
std::vector<std::pair<ClassId, double>> load_thresholds(
    const std::filesystem::path& path);

}  // namespace zsl

#endif  // ZSL_FRAMEWORK_HPP_
