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

#include "zsl/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "zsl/csv.hpp"

namespace zsl {
namespace {

// Decodes one UTF-8 sequence starting at text[pos]. Returns the code point
// and its byte length; invalid sequences decode as a single raw byte with
// code point 0xFFFFFFFF.
std::pair<char32_t, std::size_t> decode_utf8(std::string_view text,
                                             std::size_t pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) return {lead, 1};
  std::size_t length = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    length = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    cp = lead & 0x07;
  } else {
    return {0xFFFFFFFF, 1};
  }
  if (pos + length > text.size()) return {0xFFFFFFFF, 1};
  for (std::size_t i = 1; i < length; ++i) {
    if ((byte(pos + i) & 0xC0) != 0x80) return {0xFFFFFFFF, 1};
    cp = (cp << 6) | (byte(pos + i) & 0x3F);
  }
  return {cp, length};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_separator(char32_t cp) {
  if (cp < 0x80) {
    const char c = static_cast<char>(cp);
    return !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
             (c >= '0' && c <= '9'));
  }
  if (cp == 0xFFFFFFFF) return false;
  // C1 controls, no-break space and Latin-1 punctuation/symbols.
  if (cp >= 0x80 && cp <= 0xBF) return true;
  if (cp == 0xD7 || cp == 0xF7) return true;
  // General and supplemental punctuation, CJK punctuation, BOM.
  if (cp >= 0x2000 && cp <= 0x206F) return true;
  if (cp >= 0x2E00 && cp <= 0x2E7F) return true;
  if (cp >= 0x3000 && cp <= 0x303F) return true;
  if (cp == 0xFEFF) return true;
  return false;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

bool all_digits(std::string_view token) {
  return !token.empty() &&
         std::all_of(token.begin(), token.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<ClassId> parse_class_id(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  std::size_t consumed = 0;
  const std::string text(field);
  int value = 0;
  try {
    value = std::stoi(text, &consumed);
  } catch (const std::exception&) {
    throw Error("not an integer class id: '" + text + "'");
  }
  if (consumed != text.size()) {
    throw Error("not an integer class id: '" + text + "'");
  }
  return value;
}

void check_documents(const LabeledCorpus& corpus) {
  std::unordered_set<ClassId> known;
  for (const auto& meta : corpus.classes) known.insert(meta.class_id);
  for (const auto& doc : corpus.documents) {
    if (doc.gold_class && !known.count(*doc.gold_class)) {
      throw Error("document " + doc.id + " references unknown class " +
                  std::to_string(*doc.gold_class));
    }
  }
}

std::string strip_mail_headers(const std::string& text) {
  std::size_t pos = text.find("\n\n");
  const std::size_t crlf = text.find("\r\n\r\n");
  if (crlf != std::string::npos && (pos == std::string::npos || crlf < pos)) {
    return text.substr(crlf + 4);
  }
  if (pos == std::string::npos) return text;
  return text.substr(pos + 2);
}

}  // namespace

// --- ClassHierarchy -----------------------------------------------------------

ClassHierarchy::ClassHierarchy(std::vector<ClassMeta> classes)
    : classes_(std::move(classes)) {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const ClassMeta& meta = classes_[i];
    if (!index_.emplace(meta.class_id, i).second) {
      throw Error("duplicate class id " + std::to_string(meta.class_id));
    }
    if (meta.one_word_label.empty() ||
        meta.one_word_label.find_first_of(" \t\r\n") != std::string::npos) {
      throw Error("class " + std::to_string(meta.class_id) +
                  ": one_word_label must be a single word");
    }
  }
  for (const ClassMeta& meta : classes_) {
    if (meta.parent && !index_.count(*meta.parent)) {
      throw Error("class " + std::to_string(meta.class_id) +
                  " has unknown parent " + std::to_string(*meta.parent));
    }
  }
  // Walking up more than |classes| steps means a cycle.
  for (const ClassMeta& meta : classes_) {
    std::optional<ClassId> current = meta.parent;
    std::size_t steps = 0;
    while (current) {
      if (++steps > classes_.size()) {
        throw Error("class hierarchy has a cycle through class " +
                    std::to_string(meta.class_id));
      }
      current = classes_[index_.at(*current)].parent;
    }
  }
}

const ClassMeta& ClassHierarchy::at(ClassId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error("unknown class id " + std::to_string(id));
  }
  return classes_[it->second];
}

std::vector<ClassId> ClassHierarchy::ancestors(ClassId id) const {
  std::vector<ClassId> result;
  std::optional<ClassId> current = at(id).parent;
  while (current) {
    result.push_back(*current);
    current = at(*current).parent;
  }
  return result;
}

// --- Vocabulary -----------------------------------------------------------------

Vocabulary::Vocabulary(std::vector<std::string> words, std::size_t max_size)
    : words_(std::move(words)), max_size_(max_size) {
  if (words_.size() > max_size_) {
    throw Error("vocabulary larger than its max_size");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw Error("duplicate vocabulary word '" + words_[i] + "'");
    }
  }
}

std::optional<std::size_t> Vocabulary::index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::hash() const {
  std::uint64_t h = fnv1a("vocabulary");
  for (const auto& word : words_) {
    h = fnv1a(word, h);
    h = fnv1a("\n", h);
  }
  return h;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::string out = "# max_size " + std::to_string(max_size_) + "\n";
  for (const auto& word : words_) out += word + "\n";
  write_file(path, out);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::string> words;
  std::size_t max_size = 0;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# max_size ", 0) == 0) {
      max_size = std::stoull(line.substr(11));
      continue;
    }
    if (line.empty()) continue;
    if (line.find_first_of(" \t") != std::string::npos) {
      throw ParseError(path, line_number, "vocabulary entry contains spaces");
    }
    words.push_back(line);
  }
  if (max_size == 0) max_size = std::max(words.size(), std::size_t{1});
  return Vocabulary(std::move(words), max_size);
}

// --- Partition ---------------------------------------------------------------------

bool ClassPartition::is_seen(ClassId id) const {
  return std::binary_search(seen.begin(), seen.end(), id);
}

bool ClassPartition::is_unseen(ClassId id) const {
  return std::binary_search(unseen.begin(), unseen.end(), id);
}

std::vector<ClassId> LabeledCorpus::dataset_classes() const {
  std::set<ClassId> ids;
  for (const auto& doc : documents) {
    if (doc.gold_class) ids.insert(*doc.gold_class);
  }
  return {ids.begin(), ids.end()};
}

std::vector<std::size_t> LabeledCorpus::indices(Split which) const {
  std::vector<std::size_t> result;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    const Split s = split.empty() ? Split::kTrain : split[i];
    if (s == which) result.push_back(i);
  }
  return result;
}

// --- Operations ------------------------------------------------------------------

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && !all_digits(current)) {
      tokens.push_back(std::move(current));
    }
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto [cp, length] = decode_utf8(text, pos);
    if (is_separator(cp)) {
      flush();
    } else if (cp == 0xFFFFFFFF) {
      current.push_back(text[pos]);
    } else {
      append_utf8(current, to_lower(cp));
    }
    pos += length;
  }
  flush();
  return tokens;
}

Vocabulary build_vocabulary(const LabeledCorpus& corpus, std::size_t max_size) {
  std::unordered_map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (std::size_t i : corpus.indices(Split::kTrain)) {
    for (const auto& token : corpus.documents[i].tokens) {
      if (all_digits(token)) continue;
      ++counts[token];
      ++total;
    }
  }
  if (total == 0) throw Error("build_vocabulary: corpus has zero tokens");
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(),
                                                          counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > max_size) ranked.resize(max_size);
  std::vector<std::string> words;
  words.reserve(ranked.size());
  for (auto& entry : ranked) words.push_back(std::move(entry.first));
  return Vocabulary(std::move(words), max_size);
}

std::size_t unseen_class_count(std::size_t class_count, double unseen_rate) {
  if (!(unseen_rate > 0.0 && unseen_rate < 1.0)) {
    throw Error("unseen_rate must lie in (0, 1)");
  }
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(class_count) * unseen_rate + 1e-9));
}

ClassPartition partition_classes(std::span<const ClassId> classes,
                                 double unseen_rate, std::uint64_t seed) {
  std::vector<ClassId> ids(classes.begin(), classes.end());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error("partition_classes: duplicate class id");
  }
  const std::size_t unseen = unseen_class_count(ids.size(), unseen_rate);
  if (unseen == 0 || unseen >= ids.size()) {
    throw Error("partition_classes: rate " + std::to_string(unseen_rate) +
                " leaves an empty seen or unseen set for " +
                std::to_string(ids.size()) + " classes");
  }
  Rng rng(derive_seed(seed, {0x70617274}));
  shuffle(ids, rng);
  ClassPartition partition;
  partition.seed = seed;
  partition.unseen.assign(ids.begin(), ids.begin() + unseen);
  partition.seen.assign(ids.begin() + unseen, ids.end());
  std::sort(partition.seen.begin(), partition.seen.end());
  std::sort(partition.unseen.begin(), partition.unseen.end());
  return partition;
}

ClassPartition partition_classes(std::span<const ClassMeta> classes,
                                 double unseen_rate, std::uint64_t seed) {
  std::vector<ClassId> ids;
  ids.reserve(classes.size());
  for (const auto& meta : classes) ids.push_back(meta.class_id);
  return partition_classes(std::span<const ClassId>(ids), unseen_rate, seed);
}

LabeledCorpus split_train_test(const LabeledCorpus& corpus,
                               double train_fraction, std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw Error("train_fraction must lie in [0, 1]");
  }
  std::map<ClassId, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& gold = corpus.documents[i].gold_class;
    if (!gold) {
      throw Error("split_train_test: document " + corpus.documents[i].id +
                  " has no gold class");
    }
    by_class[*gold].push_back(i);
  }
  LabeledCorpus result = corpus;
  result.split.assign(corpus.documents.size(), Split::kTest);
  for (auto& [class_id, members] : by_class) {
    if (members.size() < 2) {
      throw Error("split_train_test: class " + std::to_string(class_id) +
                  " has fewer than 2 documents");
    }
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(class_id)}));
    shuffle(members, rng);
    const auto train_count = static_cast<std::size_t>(
        std::lround(train_fraction * static_cast<double>(members.size())));
    for (std::size_t k = 0; k < train_count; ++k) {
      result.split[members[k]] = Split::kTrain;
    }
  }
  return result;
}

LabeledCorpus remove_unseen_training(const LabeledCorpus& corpus,
                                     const ClassPartition& partition) {
  LabeledCorpus result;
  result.classes = corpus.classes;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const Split s = corpus.split.empty() ? Split::kTrain : corpus.split[i];
    const auto& doc = corpus.documents[i];
    if (s == Split::kTrain && doc.gold_class &&
        partition.is_unseen(*doc.gold_class)) {
      continue;
    }
    result.documents.push_back(doc);
    result.split.push_back(s);
  }
  return result;
}

void check_no_leakage(const LabeledCorpus& corpus,
                      const ClassPartition& partition) {
  for (std::size_t i : corpus.indices(Split::kTrain)) {
    const auto& doc = corpus.documents[i];
    if (doc.gold_class && partition.is_unseen(*doc.gold_class)) {
      throw Error("training document " + doc.id + " belongs to unseen class " +
                  std::to_string(*doc.gold_class));
    }
  }
}

// --- Loading --------------------------------------------------------------------------

std::vector<ClassMeta> load_class_metadata(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  CsvReader reader(in, path);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw ParseError(path, 1, "empty metadata file");
  const std::vector<std::string> expected = {
      "class_id", "label", "one_word_label", "description", "parent_id"};
  if (fields.size() < expected.size() ||
      !std::equal(expected.begin(), expected.end(), fields.begin())) {
    throw ParseError(path, 1,
                     "expected header "
                     "class_id,label,one_word_label,description,parent_id");
  }
  std::vector<ClassMeta> classes;
  while (reader.next(fields)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    if (fields.size() != 5 && fields.size() != 6) {
      throw ParseError(path, reader.line(),
                       "expected 5 or 6 fields, got " +
                           std::to_string(fields.size()));
    }
    ClassMeta meta;
    try {
      meta.class_id = *parse_class_id(fields[0]);
      meta.parent = parse_class_id(fields[4]);
    } catch (const Error& e) {
      throw ParseError(path, reader.line(), e.what());
    }
    meta.label = std::string(trim(fields[1]));
    meta.one_word_label = std::string(trim(fields[2]));
    meta.description = std::string(trim(fields[3]));
    if (fields.size() == 6) meta.dataset_key = std::string(trim(fields[5]));
    classes.push_back(std::move(meta));
  }
  ClassHierarchy validated(classes);
  return classes;
}

LabeledCorpus load_dbpedia_csv(std::span<const std::filesystem::path> files,
                               std::vector<ClassMeta> classes,
                               const DbpediaOptions& options) {
  LabeledCorpus corpus;
  corpus.classes = std::move(classes);
  std::unordered_set<ClassId> known;
  for (const auto& meta : corpus.classes) known.insert(meta.class_id);
  std::map<ClassId, std::size_t> taken;
  std::size_t dropped_empty = 0;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    CsvReader reader(in, path);
    std::vector<std::string> fields;
    std::size_t row = 0;
    while (reader.next(fields)) {
      ++row;
      if (fields.size() == 1 && fields[0].empty()) continue;
      if (fields.size() != 3) {
        throw ParseError(path, reader.line(), "expected 3 fields");
      }
      std::optional<ClassId> id;
      try {
        id = parse_class_id(fields[0]);
      } catch (const Error& e) {
        throw ParseError(path, reader.line(), e.what());
      }
      if (!id || !known.count(*id)) {
        throw ParseError(path, reader.line(), "unknown class index");
      }
      if (options.max_per_class && taken[*id] >= options.max_per_class) {
        continue;
      }
      const std::string text =
          options.include_title ? fields[1] + " " + fields[2] : fields[2];
      Document doc;
      doc.id = path.filename().string() + ":" + std::to_string(row);
      doc.tokens = tokenize(text);
      doc.gold_class = *id;
      if (doc.tokens.empty()) {
        ++dropped_empty;
        continue;
      }
      ++taken[*id];
      corpus.documents.push_back(std::move(doc));
    }
  }
  if (dropped_empty) {
    spdlog::info("dbpedia: dropped {} rows with no tokens", dropped_empty);
  }
  return corpus;
}

LabeledCorpus load_newsgroups(const std::filesystem::path& root,
                              std::vector<ClassMeta> classes,
                              const NewsgroupsOptions& options) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) {
    throw Error("not a directory: " + root.string());
  }
  LabeledCorpus corpus;
  corpus.classes = std::move(classes);
  std::unordered_map<std::string, ClassId> by_key;
  for (const auto& meta : corpus.classes) {
    by_key.emplace(meta.dataset_key.empty() ? meta.label : meta.dataset_key,
                   meta.class_id);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::map<ClassId, std::size_t> taken;
  std::set<std::string> unknown;
  for (const auto& file : files) {
    const std::string key = file.parent_path().filename().string();
    auto it = by_key.find(key);
    if (it == by_key.end()) {
      unknown.insert(key);
      continue;
    }
    if (options.max_per_class && taken[it->second] >= options.max_per_class) {
      continue;
    }
    std::string text = read_file(file);
    if (options.strip_headers) text = strip_mail_headers(text);
    Document doc;
    doc.id = fs::relative(file, root).generic_string();
    doc.tokens = tokenize(text);
    doc.gold_class = it->second;
    if (doc.tokens.empty()) continue;
    ++taken[it->second];
    corpus.documents.push_back(std::move(doc));
  }
  for (const auto& key : unknown) {
    spdlog::warn("newsgroups: directory '{}' matches no class; skipped", key);
  }
  return corpus;
}

LabeledCorpus load_labeled_tsv(const std::filesystem::path& path,
                               std::vector<ClassMeta> classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  LabeledCorpus corpus;
  corpus.classes = std::move(classes);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path, line_number, "expected class_id<TAB>text");
    }
    Document doc;
    doc.id = path.filename().string() + ":" + std::to_string(line_number);
    try {
      doc.gold_class = parse_class_id(std::string_view(line).substr(0, tab));
    } catch (const Error& e) {
      throw ParseError(path, line_number, e.what());
    }
    doc.tokens = tokenize(std::string_view(line).substr(tab + 1));
    if (doc.tokens.empty()) continue;
    corpus.documents.push_back(std::move(doc));
  }
  check_documents(corpus);
  return corpus;
}

void save_tokenized(const LabeledCorpus& corpus,
                    const std::filesystem::path& path) {
  std::string out;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& doc = corpus.documents[i];
    const Split s = corpus.split.empty() ? Split::kTrain : corpus.split[i];
    out += doc.id;
    out += '\t';
    if (doc.gold_class) out += std::to_string(*doc.gold_class);
    out += '\t';
    out += s == Split::kTrain ? "train" : "test";
    out += '\t';
    for (std::size_t t = 0; t < doc.tokens.size(); ++t) {
      if (t) out += ' ';
      out += doc.tokens[t];
    }
    out += '\n';
  }
  write_file(path, out);
}

LabeledCorpus load_tokenized(const std::filesystem::path& path,
                             std::vector<ClassMeta> classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  LabeledCorpus corpus;
  corpus.classes = std::move(classes);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 4) {
      throw ParseError(path, line_number, "expected 4 tab-separated fields");
    }
    Document doc;
    doc.id = fields[0];
    try {
      doc.gold_class = parse_class_id(fields[1]);
    } catch (const Error& e) {
      throw ParseError(path, line_number, e.what());
    }
    if (fields[2] != "train" && fields[2] != "test") {
      throw ParseError(path, line_number, "split must be train or test");
    }
    for (auto& token : split(fields[3], ' ')) {
      if (!token.empty()) doc.tokens.push_back(std::move(token));
    }
    corpus.split.push_back(fields[2] == "train" ? Split::kTrain : Split::kTest);
    corpus.documents.push_back(std::move(doc));
  }
  check_documents(corpus);
  return corpus;
}

CorpusStats corpus_stats(const LabeledCorpus& corpus,
                         const Vocabulary& vocabulary) {
  CorpusStats stats;
  stats.vocabulary_size = vocabulary.size();
  std::unordered_set<std::string_view> distinct;
  std::size_t covered = 0;
  for (const auto& doc : corpus.documents) {
    ++stats.documents;
    if (doc.gold_class) ++stats.documents_per_class[*doc.gold_class];
    for (const auto& token : doc.tokens) {
      ++stats.tokens;
      distinct.insert(token);
      if (vocabulary.contains(token)) ++covered;
    }
  }
  stats.distinct_words = distinct.size();
  stats.token_coverage =
      stats.tokens ? static_cast<double>(covered) / stats.tokens : 0.0;
  return stats;
}

}  // namespace zsl
