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

#include "zsl/embed.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <spdlog/spdlog.h>

namespace zsl {

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw Error("embedding dimension must be positive");
}

bool EmbeddingStore::add(std::string word, std::span<const float> values) {
  if (values.size() != dimension_) {
    throw Error("embedding for '" + word + "' has dimension " +
                std::to_string(values.size()) + ", expected " +
                std::to_string(dimension_));
  }
  if (index_.count(word)) return false;
  const double norm = std::sqrt(dot(values, values));
  if (norm == 0.0) throw Error("embedding for '" + word + "' is all zeros");
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
  norms_.push_back(norm);
  return true;
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path,
                                    const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::optional<EmbeddingStore> store;
  std::vector<float> values;
  std::string line;
  std::size_t line_number = 0;
  std::size_t entries_seen = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t space = line.find(' ');
    if (space == std::string::npos || space == 0) {
      throw ParseError(path, line_number, "expected a word followed by floats");
    }
    ++entries_seen;
    std::string word = line.substr(0, space);
    const bool keep_by_rank =
        options.max_words == 0 || entries_seen <= options.max_words;
    const bool keep_by_list =
        options.always_keep && options.always_keep->count(word);
    // Dimension checks still apply to skipped lines once it is known.
    values.clear();
    const char* cursor = line.data() + space;
    const char* end = line.data() + line.size();
    while (cursor < end) {
      while (cursor < end && *cursor == ' ') ++cursor;
      if (cursor >= end) break;
      float value = 0.0f;
      auto [next, ec] = std::from_chars(cursor, end, value);
      if (ec != std::errc() || (next < end && *next != ' ')) {
        throw ParseError(path, line_number,
                         "malformed number in entry '" + word + "'");
      }
      values.push_back(value);
      cursor = next;
    }
    if (!store) {
      if (values.empty()) {
        throw ParseError(path, line_number, "entry has no vector components");
      }
      store.emplace(values.size());
    }
    if (values.size() != store->dimension()) {
      throw ParseError(path, line_number,
                       "entry '" + word + "' has " +
                           std::to_string(values.size()) +
                           " components, expected " +
                           std::to_string(store->dimension()));
    }
    if (!keep_by_rank && !keep_by_list) continue;
    const bool zero = std::all_of(values.begin(), values.end(),
                                  [](float v) { return v == 0.0f; });
    if (zero) {
      ++store->skipped_zero_;
      continue;
    }
    store->add(std::move(word), values);
  }
  if (!store) throw Error("embedding file is empty: " + path.string());
  if (store->skipped_zero_) {
    spdlog::warn("{}: skipped {} all-zero vectors", path.string(),
                 store->skipped_zero_);
  }
  return std::move(*store);
}

std::optional<std::size_t> EmbeddingStore::index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t EmbeddingStore::require(std::string_view word) const {
  auto found = index(word);
  if (!found) {
    throw Error("word '" + std::string(word) + "' is not in the embedding store");
  }
  return *found;
}

std::span<const float> EmbeddingStore::vector(std::string_view word) const {
  return vector(require(word));
}

// --- Analogies -------------------------------------------------------------

AnalogySolver::AnalogySolver(const EmbeddingStore& store,
                             AnalogyOptions options)
    : store_(store), options_(options) {}

std::vector<double> AnalogySolver::similarities(std::size_t index) const {
  const auto anchor = store_.vector(index);
  const double anchor_norm = store_.norm(index);
  std::vector<double> sims(store_.size());
  for (std::size_t x = 0; x < store_.size(); ++x) {
    const double cos =
        dot(store_.vector(x), anchor) / (store_.norm(x) * anchor_norm);
    sims[x] = options_.shift_cosines ? (1.0 + cos) / 2.0 : cos;
  }
  return sims;
}

AnalogyCandidates AnalogySolver::rank(std::span<const double> sim_w,
                                      std::span<const double> sim_c,
                                      std::span<const double> sim_c_prime,
                                      std::size_t w, std::size_t c,
                                      std::size_t c_prime,
                                      std::size_t top_k) const {
  if (top_k == 0) throw Error("solve_analogy: top_k must be at least 1");
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(store_.size());
  for (std::size_t x = 0; x < store_.size(); ++x) {
    if (x == w || x == c || x == c_prime) continue;
    const double score =
        sim_c_prime[x] * sim_w[x] / (sim_c[x] + options_.epsilon);
    scored.emplace_back(score, x);
  }
  const std::size_t k = std::min(top_k, scored.size());
  auto better = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + k, scored.end(), better);
  AnalogyCandidates result;
  result.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    result.push_back(
        {store_.word(scored[i].second), scored[i].second, scored[i].first});
  }
  return result;
}

AnalogyCandidates AnalogySolver::solve(std::string_view w, std::string_view c,
                                       std::string_view c_prime,
                                       std::size_t top_k) const {
  if (w == c && c == c_prime) {
    throw Error("solve_analogy: query words are all '" + std::string(w) +
                "'; every candidate would be excluded by itself");
  }
  const std::size_t wi = store_.require(w);
  const std::size_t ci = store_.require(c);
  const std::size_t cpi = store_.require(c_prime);
  const auto sim_w = similarities(wi);
  const auto sim_c = similarities(ci);
  const auto sim_cp = similarities(cpi);
  return rank(sim_w, sim_c, sim_cp, wi, ci, cpi, top_k);
}

AnalogySolver::Anchored AnalogySolver::anchor(std::string_view c,
                                              std::string_view c_prime) const {
  Anchored anchored;
  anchored.solver_ = this;
  anchored.c_ = std::string(c);
  anchored.c_prime_ = std::string(c_prime);
  anchored.c_index_ = store_.require(c);
  anchored.c_prime_index_ = store_.require(c_prime);
  anchored.sim_c_ = similarities(anchored.c_index_);
  anchored.sim_c_prime_ = similarities(anchored.c_prime_index_);
  return anchored;
}

AnalogyCandidates AnalogySolver::Anchored::solve(std::string_view w,
                                                 std::size_t top_k) const {
  if (w == c_ && c_ == c_prime_) {
    throw Error("solve_analogy: query words are all '" + std::string(w) + "'");
  }
  const std::size_t wi = solver_->store_.require(w);
  const auto sim_w = solver_->similarities(wi);
  return solver_->rank(sim_w, sim_c_, sim_c_prime_, wi, c_index_,
                       c_prime_index_, top_k);
}

AnalogyCandidates solve_analogy(const EmbeddingStore& store,
                                std::string_view w, std::string_view c,
                                std::string_view c_prime, std::size_t top_k,
                                const AnalogyOptions& options) {
  return AnalogySolver(store, options).solve(w, c, c_prime, top_k);
}

std::vector<double> sum_embedding(const EmbeddingStore& store,
                                  std::span<const std::string> tokens) {
  std::vector<double> sum(store.dimension(), 0.0);
  for (const auto& token : tokens) {
    auto index = store.index(token);
    if (!index) continue;
    const auto v = store.vector(*index);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
  }
  return sum;
}

}  // namespace zsl
