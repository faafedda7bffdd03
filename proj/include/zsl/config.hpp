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

// Experiment configuration: INI-style sections of key = value lines.

#ifndef ZSL_CONFIG_HPP_
#define ZSL_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "zsl/baselines.hpp"
#include "zsl/framework.hpp"

namespace zsl {

struct DataConfig {
  // newsgroups | dbpedia | tsv | tokenized
  std::string format = "newsgroups";
  // Directory (newsgroups), comma-separated CSV files (dbpedia) or a file.
  std::vector<std::filesystem::path> corpus;
  std::filesystem::path classes;
  std::filesystem::path embeddings;
  std::size_t embedding_max_words = 0;
  std::filesystem::path graph;
  std::filesystem::path lexicon;
  std::size_t max_per_class = 0;
  bool include_title = true;
  bool strip_headers = true;
  std::size_t max_length = 256;
  std::size_t vocabulary_size = Vocabulary::kDefaultMaxSize;
  double train_fraction = 0.7;
};

struct ExperimentSection {
  std::filesystem::path workdir = "zsl-work";
  std::uint64_t seed = 1;
  std::size_t partitions = 10;
  double unseen_rate = 0.25;
  std::size_t workers = 1;
  bool parallel_partitions = false;
};

struct AugmentSection {
  bool enabled = true;
  std::size_t per_unseen = 3000;
  std::size_t top_k = TopicTranslator::kDefaultTopK;
  AnalogyOptions analogy;
};

struct FeatureSection {
  int k = 3;
  std::vector<std::string> relations = {"RelatedTo", "IsA", "PartOf",
                                        "AtLocation"};
};

struct NetworkSection {
  std::vector<std::size_t> filter_sizes;
  std::size_t filters = 0;
  std::vector<std::size_t> dense;
  double dropout = 0.0;
  neural::TrainConfig train;
};

struct Phase1Section {
  NetworkSection network{{3, 4, 5}, 400, {300}, 0.0, {}};
  double negative_ratio = 4.0;
  double alpha = 3.0;
};

struct Phase2Section {
  NetworkSection network{{2, 4, 8}, 600, {400, 100}, 0.0, {}};
  std::size_t negative_ratio = 1;
  ZeroShotInput input = ZeroShotInput::kAll;
};

struct AblationSection {
  // Retrain Phase 1 without augmented negatives.
  bool augmentation = true;
  // Zero-shot input combinations to retrain and compare.
  std::vector<ZeroShotInput> inputs = all_zeroshot_inputs();
  // Extra zero-shot negative ratios to sweep (the main ratio is always run).
  std::vector<std::size_t> negative_ratios;
};

struct BaselineSection {
  bool enabled = true;
  LabelAggregation aggregation = LabelAggregation::kMax;
  // Restrict baseline predictions for unseen-gold documents to C_U.
  bool restrict_unseen = false;
};

struct ExperimentConfig {
  DataConfig data;
  ExperimentSection experiment;
  AugmentSection augment;
  FeatureSection features;
  Phase1Section phase1;
  Phase2Section phase2;
  AblationSection ablation;
  BaselineSection baselines;

  // Relative paths resolve against the config file's directory.
  static ExperimentConfig load(const std::filesystem::path& path);
  static ExperimentConfig parse(const std::string& text,
                                const std::filesystem::path& base_dir);

  // Checks value ranges and that every referenced file exists.
  void validate() const;

  // Full effective configuration with defaults resolved.
  std::string to_ini() const;
  std::uint64_t hash() const;

  neural::TextCnnConfig phase1_cnn(std::size_t input_dim) const;
  neural::TextCnnConfig traditional_cnn(std::size_t input_dim,
                                        std::size_t classes) const;
  neural::TextCnnConfig zeroshot_cnn(std::size_t input_dim) const;
};

// Accepts `v_w;v_c;v_wc` as well as `v_w+v_c+v_wc` (INI values cannot
// safely carry ';').
ZeroShotInput parse_zeroshot_input_alias(const std::string& name);

}  // namespace zsl

#endif  // ZSL_CONFIG_HPP_
