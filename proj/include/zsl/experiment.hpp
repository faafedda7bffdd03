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

// Experiment orchestration over repeated seen/unseen partitions.
//
// Working directory layout:
//   prepared/corpus.tsv        tokenized corpus with the train/test split
//   prepared/vocab.txt
//   prepared/partitions.json   every (C_S, C_U) draw, shared by all systems
//   prepared/features.bin      relationship-vector table
//   partition-<i>/augmented.tsv
//   partition-<i>/checkpoint/  trained models
//   partition-<i>/metrics.json, ablation.json, failure.txt
//   report.txt, report.csv, report.json

#ifndef ZSL_EXPERIMENT_HPP_
#define ZSL_EXPERIMENT_HPP_

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "zsl/config.hpp"
#include "zsl/report.hpp"

namespace zsl {

class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);
  ~Experiment();

  const ExperimentConfig& config() const { return config_; }
  std::filesystem::path workdir() const { return config_.experiment.workdir; }
  std::filesystem::path partition_dir(std::size_t partition) const;

  // Stages. Later stages rerun missing upstream outputs on demand.
  void prepare();
  void augment(std::size_t partition);
  void features();
  void train(std::size_t partition);
  MetricsReport evaluate(std::size_t partition);
  MetricsReport ablate(std::size_t partition);
  // Collects per-partition results into report.{txt,csv,json}.
  MetricsReport report();

  // Every stage for every partition. A failing partition is recorded in the
  // report and does not stop the others.
  MetricsReport run();

  // Per-partition master seed.
  std::uint64_t partition_seed(std::size_t partition) const;
  const std::vector<ClassPartition>& partitions();
  const LabeledCorpus& corpus();
  const Vocabulary& vocabulary();
  const ClassHierarchy& hierarchy();

 private:
  struct Resources;

  bool prepared() const;
  void load_prepared();
  const EmbeddingStore& embeddings();
  const EmbeddingStore& analogy_store();
  const PosLexicon& lexicon();
  const FeatureTable& feature_table();
  const DocumentEncoder& encoder();
  std::vector<EncodedDocument> encoded(Split split);
  void check_partition(std::size_t partition);

  ExperimentConfig config_;
  std::unique_ptr<Resources> r_;
  std::recursive_mutex mutex_;
};

// Convenience wrapper: Experiment(config).run().
MetricsReport run_experiment(const ExperimentConfig& config);

}  // namespace zsl

#endif  // ZSL_EXPERIMENT_HPP_
