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

#include "zsl/augment.hpp"

#include <fstream>
#include <map>
#include <memory>

#include <spdlog/spdlog.h>

namespace zsl {

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun:
      return "NOUN";
    case PosTag::kVerb:
      return "VERB";
    case PosTag::kAdj:
      return "ADJ";
    case PosTag::kAdv:
      return "ADV";
    case PosTag::kOther:
      return "OTHER";
  }
  return "OTHER";
}

std::optional<PosTag> parse_pos_tag(std::string_view text) {
  if (text == "NOUN") return PosTag::kNoun;
  if (text == "VERB") return PosTag::kVerb;
  if (text == "ADJ") return PosTag::kAdj;
  if (text == "ADV") return PosTag::kAdv;
  if (text == "OTHER") return PosTag::kOther;
  return std::nullopt;
}

// --- PosLexicon -----------------------------------------------------------------

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  PosLexicon lexicon;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3 || fields[0].empty()) {
      throw ParseError(path, line_number,
                       "expected word<TAB>primary_tag<TAB>tags");
    }
    auto primary = parse_pos_tag(fields[1]);
    if (!primary) {
      throw ParseError(path, line_number, "unknown tag '" + fields[1] + "'");
    }
    std::vector<PosTag> tags;
    for (const auto& name : split(fields[2], ',')) {
      if (name.empty()) continue;
      auto tag = parse_pos_tag(name);
      if (!tag) {
        throw ParseError(path, line_number, "unknown tag '" + name + "'");
      }
      tags.push_back(*tag);
    }
    lexicon.add(fields[0], *primary, std::move(tags));
  }
  return lexicon;
}

void PosLexicon::add(std::string word, PosTag primary,
                     std::vector<PosTag> tags) {
  Entry entry;
  entry.primary = primary;
  entry.tags = static_cast<std::uint8_t>(1u << static_cast<unsigned>(primary));
  for (PosTag tag : tags) {
    entry.tags |= static_cast<std::uint8_t>(1u << static_cast<unsigned>(tag));
  }
  entries_[std::move(word)] = entry;
}

const PosLexicon::Entry* PosLexicon::find(std::string_view word) const {
  auto it = entries_.find(std::string(word));
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<PosTag> PosLexicon::primary(std::string_view word) const {
  const Entry* entry = find(word);
  if (!entry) return std::nullopt;
  return entry->primary;
}

bool PosLexicon::has_tag(std::string_view word, PosTag tag) const {
  const Entry* entry = find(word);
  return entry && entry->has(tag);
}

bool is_valid_pos(std::string_view word, const PosLexicon& lexicon) {
  auto tag = lexicon.primary(word);
  return tag && *tag != PosTag::kOther;
}

// --- ReplaceDict ----------------------------------------------------------------

const std::string* ReplaceDict::find(const std::string& original) const {
  auto it = by_original_.find(original);
  return it == by_original_.end() ? nullptr : &entries_[it->second].second;
}

bool ReplaceDict::is_value(const std::string& replacement) const {
  return values_.count(replacement) != 0;
}

void ReplaceDict::insert(const std::string& original,
                         const std::string& replacement) {
  if (by_original_.count(original)) {
    throw Error("ReplaceDict: '" + original + "' already mapped");
  }
  if (!values_.insert(replacement).second) {
    throw Error("ReplaceDict: '" + replacement + "' already used");
  }
  by_original_.emplace(original, entries_.size());
  entries_.emplace_back(original, replacement);
}

// --- Translation ------------------------------------------------------------------

TopicTranslator::TopicTranslator(const EmbeddingStore& store,
                                 const PosLexicon& lexicon,
                                 std::string_view from_word,
                                 std::string_view to_word, std::size_t top_k,
                                 AnalogyOptions options)
    : store_(store),
      lexicon_(lexicon),
      solver_(store, options),
      anchored_(solver_.anchor(from_word, to_word)),
      top_k_(top_k) {
  if (from_word == to_word) {
    throw Error("topic translation needs two different class labels");
  }
  if (top_k_ == 0) throw Error("top_k must be at least 1");
}

const AnalogyCandidates& TopicTranslator::candidates(
    const std::string& word) const {
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(word);
    if (it != memo_.end()) return it->second;
  }
  AnalogyCandidates computed = anchored_.solve(word, top_k_);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  return memo_.emplace(word, std::move(computed)).first->second;
}

Translation TopicTranslator::translate(const Document& document) const {
  Translation result;
  result.document.id = document.id;
  result.document.gold_class = document.gold_class;
  result.document.tokens.reserve(document.tokens.size());
  ReplaceDict& dict = result.replacements;
  for (const std::string& word : document.tokens) {
    if (!is_valid_pos(word, lexicon_)) {
      result.document.tokens.push_back(word);
      continue;
    }
    if (const std::string* known = dict.find(word)) {
      result.document.tokens.push_back(*known);
      continue;
    }
    // Words without a vector have no analogy; they pass through.
    if (!store_.contains(word)) {
      result.document.tokens.push_back(word);
      continue;
    }
    const PosTag pos = *lexicon_.primary(word);
    const std::string* chosen = nullptr;
    for (const auto& candidate : candidates(word)) {
      if (dict.is_value(candidate.word)) continue;
      if (!lexicon_.has_tag(candidate.word, pos)) continue;
      chosen = &candidate.word;
      break;
    }
    if (!chosen) {
      result.document.tokens.push_back(word);
      continue;
    }
    dict.insert(word, *chosen);
    result.document.tokens.push_back(*chosen);
  }
  return result;
}

Translation translate_document(const Document& document, const ClassMeta& c,
                               const ClassMeta& c_prime,
                               const EmbeddingStore& store,
                               const PosLexicon& lexicon, std::size_t top_k) {
  TopicTranslator translator(store, lexicon, c.one_word_label,
                             c_prime.one_word_label, top_k);
  return translator.translate(document);
}

// --- Corpus generation ------------------------------------------------------------

std::vector<AugmentedDocument> generate_augmented_corpus(
    const LabeledCorpus& corpus, const ClassPartition& partition,
    const EmbeddingStore& store, const PosLexicon& lexicon,
    const AugmentOptions& options, std::uint64_t seed) {
  if (options.per_unseen == 0) {
    throw Error("generate_augmented_corpus: per_unseen must be at least 1");
  }
  const ClassHierarchy hierarchy(corpus.classes);
  std::map<ClassId, std::vector<std::size_t>> sources;
  for (std::size_t i : corpus.indices(Split::kTrain)) {
    const auto& gold = corpus.documents[i].gold_class;
    if (gold && partition.is_seen(*gold)) sources[*gold].push_back(i);
  }
  if (sources.empty()) {
    throw Error("generate_augmented_corpus: no seen-class training documents");
  }
  std::vector<ClassId> seen_with_docs;
  for (const auto& [id, members] : sources) seen_with_docs.push_back(id);

  // One translator per (source, target) pair shares the memoized analogies.
  std::map<std::pair<ClassId, ClassId>, std::unique_ptr<TopicTranslator>>
      translators;
  for (ClassId target : partition.unseen) {
    for (ClassId source : seen_with_docs) {
      translators[{source, target}] = std::make_unique<TopicTranslator>(
          store, lexicon, hierarchy.at(source).one_word_label,
          hierarchy.at(target).one_word_label, options.top_k,
          options.analogy);
    }
  }

  struct Job {
    ClassId target;
    ClassId source;
    std::size_t document;
  };
  std::vector<Job> jobs;
  jobs.reserve(partition.unseen.size() * options.per_unseen);
  for (ClassId target : partition.unseen) {
    std::vector<ClassId> order = seen_with_docs;
    Rng order_rng(derive_seed(seed, {static_cast<std::uint64_t>(target)}));
    shuffle(order, order_rng);
    for (std::size_t i = 0; i < options.per_unseen; ++i) {
      const ClassId source = order[i % order.size()];
      const auto& members = sources.at(source);
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(target), i}));
      jobs.push_back({target, source, members[uniform_index(rng, members.size())]});
    }
  }

  std::vector<AugmentedDocument> output(jobs.size());
  parallel_for(jobs.size(), options.workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    const auto& translator = *translators.at({job.source, job.target});
    Translation translation = translator.translate(corpus.documents[job.document]);
    AugmentedDocument& out = output[j];
    out.document = std::move(translation.document);
    out.document.id = "aug:" + std::to_string(job.target) + ":" +
                      std::to_string(j) + ":" + corpus.documents[job.document].id;
    out.document.gold_class = job.target;
    out.source_class = job.source;
    out.source_index = job.document;
  });
  spdlog::info("augmentation: {} documents for {} unseen classes", output.size(),
               partition.unseen.size());
  return output;
}

void save_augmented(const std::vector<AugmentedDocument>& documents,
                    const std::filesystem::path& path) {
  std::string out;
  for (const auto& aug : documents) {
    out += std::to_string(aug.document.gold_class.value_or(-1));
    out += '\t';
    out += std::to_string(aug.source_class);
    out += '\t';
    out += std::to_string(aug.source_index);
    out += '\t';
    for (std::size_t t = 0; t < aug.document.tokens.size(); ++t) {
      if (t) out += ' ';
      out += aug.document.tokens[t];
    }
    out += '\n';
  }
  write_file(path, out);
}

std::vector<AugmentedDocument> load_augmented(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<AugmentedDocument> documents;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 4) {
      throw ParseError(path, line_number, "expected 4 tab-separated fields");
    }
    AugmentedDocument aug;
    try {
      aug.document.gold_class = std::stoi(fields[0]);
      aug.source_class = std::stoi(fields[1]);
      aug.source_index = std::stoull(fields[2]);
    } catch (const std::exception&) {
      throw ParseError(path, line_number, "malformed numeric field");
    }
    aug.document.id = "aug:" + std::to_string(line_number);
    for (auto& token : split(fields[3], ' ')) {
      if (!token.empty()) aug.document.tokens.push_back(std::move(token));
    }
    documents.push_back(std::move(aug));
  }
  return documents;
}

}  // namespace zsl
