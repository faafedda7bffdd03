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

// Pretrained word vectors, cosine similarity and 3CosMul analogies.

#ifndef ZSL_EMBED_HPP_
#define ZSL_EMBED_HPP_

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zsl/common.hpp"

namespace zsl {

class EmbeddingStore {
 public:
  static constexpr std::size_t kDefaultDimension = 200;

  explicit EmbeddingStore(std::size_t dimension = kDefaultDimension);

  struct LoadOptions {
    // Keep only the first N entries of the file (0 = all). GloVe files are
    // frequency ordered, so this keeps the most frequent words.
    std::size_t max_words = 0;
    // Words kept even past `max_words`.
    const std::unordered_set<std::string>* always_keep = nullptr;
  };

  // GloVe text layout: `word f1 f2 ... fD` per line. The dimension is taken
  // from the first line. Duplicate words keep their first occurrence and
  // all-zero vectors are skipped.
  static EmbeddingStore load(const std::filesystem::path& path,
                             const LoadOptions& options);
  static EmbeddingStore load(const std::filesystem::path& path) {
    return load(path, LoadOptions{});
  }

  // Returns false if the word is already present. Throws on a dimension
  // mismatch or an all-zero vector.
  bool add(std::string word, std::span<const float> values);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  std::size_t skipped_zero_vectors() const { return skipped_zero_; }

  std::optional<std::size_t> index(std::string_view word) const;
  bool contains(std::string_view word) const { return index(word).has_value(); }
  const std::string& word(std::size_t index) const { return words_[index]; }

  std::span<const float> vector(std::size_t index) const {
    return {data_.data() + index * dimension_, dimension_};
  }
  // Throws naming the word if it is absent.
  std::span<const float> vector(std::string_view word) const;
  std::size_t require(std::string_view word) const;

  // Euclidean norm, cached at insertion.
  double norm(std::size_t index) const { return norms_[index]; }

 private:
  std::size_t dimension_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
  std::vector<double> norms_;
  std::size_t skipped_zero_ = 0;
};

template <typename A, typename B>
double dot(std::span<const A> a, std::span<const B> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

// dot(a, b) / (|a| |b|). Throws on unequal dimensions or a zero vector.
template <typename A, typename B>
double cosine(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size()) throw Error("cosine: dimension mismatch");
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) throw Error("cosine: zero vector");
  return dot(a, b) / (na * nb);
}

inline double cosine(const std::vector<double>& a,
                     const std::vector<double>& b) {
  return cosine(std::span<const double>(a), std::span<const double>(b));
}

struct AnalogyCandidate {
  std::string word;
  std::size_t index = 0;
  double score = 0.0;
};

// Descending score; equal scores ordered by ascending store index.
using AnalogyCandidates = std::vector<AnalogyCandidate>;

struct AnalogyOptions {
  double epsilon = 0.001;
  // Map cosines to [0, 1] via (1 + cos) / 2 before the multiplicative
  // combination.
  bool shift_cosines = true;
};

// Solves "c : w :: c' : ?" with 3CosMul:
//   argmax_x  sim(x, c') * sim(x, w) / (sim(x, c) + epsilon)
// over the whole store minus {w, c, c'}. Exhaustive scan.
class AnalogySolver {
 public:
  explicit AnalogySolver(const EmbeddingStore& store,
                         AnalogyOptions options = {});

  AnalogyCandidates solve(std::string_view w, std::string_view c,
                          std::string_view c_prime, std::size_t top_k) const;

  // Query context with the class pair fixed. Similarities of every word to c
  // and c' are computed once; each solve() then costs one pass over the
  // store. Immutable after construction and safe to share across threads.
  class Anchored {
   public:
    AnalogyCandidates solve(std::string_view w, std::size_t top_k) const;
    const std::string& c() const { return c_; }
    const std::string& c_prime() const { return c_prime_; }

   private:
    friend class AnalogySolver;
    const AnalogySolver* solver_ = nullptr;
    std::string c_;
    std::string c_prime_;
    std::size_t c_index_ = 0;
    std::size_t c_prime_index_ = 0;
    std::vector<double> sim_c_;
    std::vector<double> sim_c_prime_;
  };

  Anchored anchor(std::string_view c, std::string_view c_prime) const;

  const EmbeddingStore& store() const { return store_; }
  const AnalogyOptions& options() const { return options_; }

  // Similarity of every store entry to entry `index`, shifted if configured.
  std::vector<double> similarities(std::size_t index) const;

 private:
  AnalogyCandidates rank(std::span<const double> sim_w,
                         std::span<const double> sim_c,
                         std::span<const double> sim_c_prime,
                         std::size_t w, std::size_t c, std::size_t c_prime,
                         std::size_t top_k) const;

  const EmbeddingStore& store_;
  AnalogyOptions options_;
};

AnalogyCandidates solve_analogy(const EmbeddingStore& store,
                                std::string_view w, std::string_view c,
                                std::string_view c_prime, std::size_t top_k,
                                const AnalogyOptions& options = {});

// Element-wise sum of the vectors of in-store tokens; zeros if none.
std::vector<double> sum_embedding(const EmbeddingStore& store,
                                  std::span<const std::string> tokens);

}  // namespace zsl

#endif  // ZSL_EMBED_HPP_
