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

// Topic translation: rewrite a document of class c into the topic of class
// c' one content word at a time, using word analogies.

#ifndef ZSL_AUGMENT_HPP_
#define ZSL_AUGMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "zsl/corpus.hpp"
#include "zsl/embed.hpp"

namespace zsl {

enum class PosTag : std::uint8_t { kNoun, kVerb, kAdj, kAdv, kOther };

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view text);

// Context-free word -> part-of-speech lookup.
class PosLexicon {
 public:
  struct Entry {
    PosTag primary = PosTag::kOther;
    std::uint8_t tags = 0;  // bit set over PosTag

    bool has(PosTag tag) const {
      return tags & (1u << static_cast<unsigned>(tag));
    }
  };

  // `word<TAB>primary_tag<TAB>tag1,tag2,...`; `#` starts a comment line.
  static PosLexicon load(const std::filesystem::path& path);

  // The primary tag is always added to the tag set.
  void add(std::string word, PosTag primary, std::vector<PosTag> tags = {});

  const Entry* find(std::string_view word) const;
  std::optional<PosTag> primary(std::string_view word) const;
  bool has_tag(std::string_view word, PosTag tag) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, Entry> entries_;
};

// True iff the word's primary tag is a noun, verb, adjective or adverb.
bool is_valid_pos(std::string_view word, const PosLexicon& lexicon);

// original -> replacement, injective, kept in insertion order.
class ReplaceDict {
 public:
  const std::string* find(const std::string& original) const;
  bool is_value(const std::string& replacement) const;
  void insert(const std::string& original, const std::string& replacement);
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::unordered_map<std::string, std::size_t> by_original_;
  std::unordered_set<std::string> values_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct Translation {
  Document document;
  ReplaceDict replacements;
};

// Translates documents from one class topic to another. Candidate lists per
// source word are memoized; the per-document ReplaceDict is not. Safe to use
// from several threads.
class TopicTranslator {
 public:
  static constexpr std::size_t kDefaultTopK = 20;

  // `from_word` / `to_word` are the one-word labels of c and c'.
  TopicTranslator(const EmbeddingStore& store, const PosLexicon& lexicon,
                  std::string_view from_word, std::string_view to_word,
                  std::size_t top_k = kDefaultTopK,
                  AnalogyOptions options = {});

  Translation translate(const Document& document) const;

 private:
  const AnalogyCandidates& candidates(const std::string& word) const;

  const EmbeddingStore& store_;
  const PosLexicon& lexicon_;
  AnalogySolver solver_;
  AnalogySolver::Anchored anchored_;
  std::size_t top_k_;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::string, AnalogyCandidates> memo_;
};

Translation translate_document(const Document& document, const ClassMeta& c,
                               const ClassMeta& c_prime,
                               const EmbeddingStore& store,
                               const PosLexicon& lexicon,
                               std::size_t top_k = TopicTranslator::kDefaultTopK);

struct AugmentedDocument {
  Document document;  // gold_class holds the target (pseudo) class
  ClassId source_class = 0;
  std::size_t source_index = 0;  // index into the corpus documents
};

struct AugmentOptions {
  std::size_t per_unseen = 1;
  std::size_t top_k = TopicTranslator::kDefaultTopK;
  std::size_t workers = 1;
  AnalogyOptions analogy;
};

// For every unseen class, translates `per_unseen` training documents drawn
// round-robin over the seen classes (uniformly within each class) into that
// class's topic. Deterministic in `seed` regardless of `workers`.
std::vector<AugmentedDocument> generate_augmented_corpus(
    const LabeledCorpus& corpus, const ClassPartition& partition,
    const EmbeddingStore& store, const PosLexicon& lexicon,
    const AugmentOptions& options, std::uint64_t seed);

// `target<TAB>source<TAB>source_index<TAB>tokens` per line.
void save_augmented(const std::vector<AugmentedDocument>& documents,
                    const std::filesystem::path& path);
std::vector<AugmentedDocument> load_augmented(
    const std::filesystem::path& path);

}  // namespace zsl

#endif  // ZSL_AUGMENT_HPP_
