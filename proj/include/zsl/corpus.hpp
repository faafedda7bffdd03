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

// Corpora, class metadata, vocabulary and the seen/unseen protocol.

#ifndef ZSL_CORPUS_HPP_
#define ZSL_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zsl/common.hpp"

namespace zsl {

struct Document {
  std::string id;
  std::vector<std::string> tokens;
  std::optional<ClassId> gold_class;
};

struct ClassMeta {
  ClassId class_id = 0;
  std::string label;
  // Single embeddable word standing in for multi-word labels.
  std::string one_word_label;
  std::string description;
  std::optional<ClassId> parent;
  // Source-specific key (20newsgroups directory name); empty means `label`.
  std::string dataset_key;
};

// Validated class records with parent links forming a forest.
class ClassHierarchy {
 public:
  ClassHierarchy() = default;
  explicit ClassHierarchy(std::vector<ClassMeta> classes);

  const std::vector<ClassMeta>& all() const { return classes_; }
  bool contains(ClassId id) const { return index_.count(id) != 0; }
  const ClassMeta& at(ClassId id) const;

  // Nearest ancestor first.
  std::vector<ClassId> ancestors(ClassId id) const;

 private:
  std::vector<ClassMeta> classes_;
  std::unordered_map<ClassId, std::size_t> index_;
};

class Vocabulary {
 public:
  static constexpr std::size_t kDefaultMaxSize = 20000;

  Vocabulary() = default;
  Vocabulary(std::vector<std::string> words, std::size_t max_size);

  std::size_t size() const { return words_.size(); }
  std::size_t max_size() const { return max_size_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(std::size_t index) const { return words_.at(index); }
  std::optional<std::size_t> index(std::string_view word) const;
  bool contains(std::string_view word) const { return index(word).has_value(); }

  // Order-sensitive digest used to detect stale feature caches.
  std::uint64_t hash() const;

  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t max_size_ = kDefaultMaxSize;
};

struct ClassPartition {
  std::vector<ClassId> seen;    // sorted
  std::vector<ClassId> unseen;  // sorted
  std::uint64_t seed = 0;

  bool is_seen(ClassId id) const;
  bool is_unseen(ClassId id) const;
};

enum class Split : std::uint8_t { kTrain, kTest };

struct LabeledCorpus {
  std::vector<Document> documents;
  std::vector<ClassMeta> classes;
  // Parallel to `documents`. Empty until split_train_test runs.
  std::vector<Split> split;

  // Classes that own at least one document, ascending. Ancestor-only
  // metadata records are excluded.
  std::vector<ClassId> dataset_classes() const;
  std::vector<std::size_t> indices(Split which) const;
};

// Lowercases, treats punctuation and whitespace as separators, drops tokens
// made only of digits. Never fails; bytes that are not valid UTF-8 are kept
// as word characters.
std::vector<std::string> tokenize(std::string_view text);

// Top-`max_size` train-split words by frequency, ties lexicographic. When the
// corpus has no split every document counts as training.
Vocabulary build_vocabulary(const LabeledCorpus& corpus,
                            std::size_t max_size = Vocabulary::kDefaultMaxSize);

// Number of unseen classes for an unseen rate: floor(n * rate).
std::size_t unseen_class_count(std::size_t class_count, double unseen_rate);

ClassPartition partition_classes(std::span<const ClassMeta> classes,
                                 double unseen_rate, std::uint64_t seed);
ClassPartition partition_classes(std::span<const ClassId> classes,
                                 double unseen_rate, std::uint64_t seed);

// Stratified per-class split; round(fraction * n_c) documents of each class go
// to training.
LabeledCorpus split_train_test(const LabeledCorpus& corpus,
                               double train_fraction, std::uint64_t seed);

// Drops training documents of unseen classes. Test documents are kept.
LabeledCorpus remove_unseen_training(const LabeledCorpus& corpus,
                                     const ClassPartition& partition);

// Throws if any training document belongs to an unseen class.
void check_no_leakage(const LabeledCorpus& corpus,
                      const ClassPartition& partition);

// --- Loading ----------------------------------------------------------------

// CSV with header: class_id,label,one_word_label,description,parent_id
// and an optional trailing dataset_key column.
std::vector<ClassMeta> load_class_metadata(const std::filesystem::path& path);

struct DbpediaOptions {
  bool include_title = true;
  // 0 keeps every row; otherwise the first N rows of each class in file order.
  std::size_t max_per_class = 0;
};

// Three columns: 1-based class index, title, content.
LabeledCorpus load_dbpedia_csv(std::span<const std::filesystem::path> files,
                               std::vector<ClassMeta> classes,
                               const DbpediaOptions& options = {});

struct NewsgroupsOptions {
  bool strip_headers = true;
  std::size_t max_per_class = 0;
};

// One file per document; the immediate parent directory names the class
// (matched against dataset_key, then label). Files are visited in sorted path
// order so the result is independent of directory iteration order.
LabeledCorpus load_newsgroups(const std::filesystem::path& root,
                              std::vector<ClassMeta> classes,
                              const NewsgroupsOptions& options = {});

// Lines of `class_id<TAB>text`.
LabeledCorpus load_labeled_tsv(const std::filesystem::path& path,
                               std::vector<ClassMeta> classes);

// Tokenized corpus with split: `id<TAB>class<TAB>train|test<TAB>tokens`.
void save_tokenized(const LabeledCorpus& corpus,
                    const std::filesystem::path& path);
LabeledCorpus load_tokenized(const std::filesystem::path& path,
                             std::vector<ClassMeta> classes);

struct CorpusStats {
  std::map<ClassId, std::size_t> documents_per_class;
  std::size_t documents = 0;
  std::size_t tokens = 0;
  std::size_t distinct_words = 0;
  std::size_t vocabulary_size = 0;
  // Fraction of token occurrences covered by the vocabulary.
  double token_coverage = 0.0;
};

CorpusStats corpus_stats(const LabeledCorpus& corpus,
                         const Vocabulary& vocabulary);

}  // namespace zsl

#endif  // ZSL_CORPUS_HPP_
