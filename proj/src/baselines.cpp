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

#include "zsl/baselines.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace zsl {

ClassId baseline_count(const Document& document,
                       std::span<const ClassMeta> classes) {
  if (classes.empty()) throw Error("baseline_count: no classes");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& token : document.tokens) ++counts[token];
  const ClassMeta* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& meta : classes) {
    const auto it = counts.find(meta.one_word_label);
    const std::size_t n = it == counts.end() ? 0 : it->second;
    if (!best || n > best_count ||
        (n == best_count && meta.class_id < best->class_id)) {
      best = &meta;
      best_count = n;
    }
  }
  return best->class_id;
}

LabelAggregation parse_label_aggregation(const std::string& name) {
  if (name == "max") return LabelAggregation::kMax;
  if (name == "mean") return LabelAggregation::kMean;
  throw Error("unknown label aggregation '" + name + "'");
}

std::string to_string(LabelAggregation aggregation) {
  return aggregation == LabelAggregation::kMax ? "max" : "mean";
}

namespace {

// Normalizes in place; returns false for a zero vector.
bool normalize(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq == 0.0) return false;
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
  return true;
}

}  // namespace

LabelSimilarityBaseline::LabelSimilarityBaseline(
    const EmbeddingStore& store, std::span<const ClassMeta> classes,
    LabelAggregation aggregation)
    : store_(store), aggregation_(aggregation) {
  for (const auto& meta : classes) {
    ids_.push_back(meta.class_id);
    const auto tokens = tokenize(meta.label);
    auto v = sum_embedding(store, tokens);
    if (!normalize(v)) v.clear();
    label_units_.push_back(std::move(v));
  }
}

std::vector<double> LabelSimilarityBaseline::scores(
    const Document& document) const {
  const std::size_t d = store_.dimension();
  const std::size_t n = document.tokens.size();
  std::vector<std::optional<std::size_t>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = store_.index(document.tokens[i]);

  // Unit vectors of every embeddable n-gram.
  std::vector<std::vector<double>> grams;
  for (std::size_t len = 1; len <= 3; ++len) {
    for (std::size_t start = 0; start + len <= n; ++start) {
      std::vector<double> sum(d, 0.0);
      bool any = false;
      for (std::size_t i = start; i < start + len; ++i) {
        if (!rows[i]) continue;
        any = true;
        const auto v = store_.vector(*rows[i]);
        for (std::size_t k = 0; k < d; ++k) sum[k] += v[k];
      }
      if (any && normalize(sum)) grams.push_back(std::move(sum));
    }
  }

  const double none = -std::numeric_limits<double>::infinity();
  std::vector<double> out(ids_.size(), none);
  if (grams.empty()) return out;
  for (std::size_t c = 0; c < ids_.size(); ++c) {
    const auto& label = label_units_[c];
    if (label.empty()) continue;
    double best = none;
    double total = 0.0;
    for (const auto& g : grams) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += g[k] * label[k];
      best = std::max(best, s);
      total += s;
    }
    out[c] = aggregation_ == LabelAggregation::kMax
                 ? best
                 : total / static_cast<double>(grams.size());
  }
  return out;
}

ClassId LabelSimilarityBaseline::predict(const Document& document) const {
  if (ids_.empty()) throw Error("label similarity: no classes");
  const auto s = scores(document);
  std::size_t best = 0;
  for (std::size_t c = 1; c < ids_.size(); ++c) {
    if (s[c] > s[best] || (s[c] == s[best] && ids_[c] < ids_[best])) best = c;
  }
  return ids_[best];
}

ClassId baseline_label_similarity(const Document& document,
                                  std::span<const ClassMeta> classes,
                                  const EmbeddingStore& store,
                                  LabelAggregation aggregation) {
  return LabelSimilarityBaseline(store, classes, aggregation).predict(document);
}

}  // namespace zsl
