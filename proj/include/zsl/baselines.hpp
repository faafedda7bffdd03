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

// Training-free reference classifiers.

#ifndef ZSL_BASELINES_HPP_
#define ZSL_BASELINES_HPP_

#include <span>
#include <string>
#include <vector>

#include "zsl/corpus.hpp"
#include "zsl/embed.hpp"

namespace zsl {

// Class whose one-word label occurs most often in the document. Ties and the
// all-zero case go to the lowest class id.
ClassId baseline_count(const Document& document,
                       std::span<const ClassMeta> classes);

enum class LabelAggregation { kMax, kMean };

LabelAggregation parse_label_aggregation(const std::string& name);
std::string to_string(LabelAggregation aggregation);

// Scores each class by comparing the summed embedding of its label tokens with
// the summed embedding of every 1-, 2- and 3-gram of the document, reduced by
// max (default) or mean; n-grams without any embedded token are skipped.
class LabelSimilarityBaseline {
 public:
  LabelSimilarityBaseline(const EmbeddingStore& store,
                          std::span<const ClassMeta> classes,
                          LabelAggregation aggregation = LabelAggregation::kMax);

  // Per-class scores in the order of the constructor's classes. Classes
  // without an embeddable label, or documents without embeddable n-grams,
  // score -infinity.
  std::vector<double> scores(const Document& document) const;

  // Highest score; ties go to the lowest class id.
  ClassId predict(const Document& document) const;

 private:
  const EmbeddingStore& store_;
  std::vector<ClassId> ids_;
  std::vector<std::vector<double>> label_units_;  // empty if not embeddable
  LabelAggregation aggregation_;
};

ClassId baseline_label_similarity(const Document& document,
                                  std::span<const ClassMeta> classes,
                                  const EmbeddingStore& store,
                                  LabelAggregation aggregation =
                                      LabelAggregation::kMax);

}  // namespace zsl

#endif  // ZSL_BASELINES_HPP_
