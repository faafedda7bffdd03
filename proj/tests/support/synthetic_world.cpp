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

#include "synthetic_world.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "zsl/csv.hpp"

namespace zsl::testing {

namespace {

const std::vector<std::string>& class_names() {
  static const std::vector<std::string> kNames = {
      "alpha", "bravo", "charlie", "delta",  "echo",    "foxtrot", "golf",
      "hotel", "india", "juliet",  "kilo",   "lima",    "mike",    "november",
      "oscar", "papa",  "quebec",  "romeo",  "sierra",  "tango"};
  return kNames;
}

const std::vector<std::string>& role_syllables() {
  static const std::vector<std::string> kRoles = {"ka", "lo", "mi", "nu", "pe",
                                                  "ri", "su", "te", "vo", "ze"};
  return kRoles;
}

const std::vector<std::string>& common_words() {
  static const std::vector<std::string> kWords = {
      "report", "people", "place",  "time",   "world",  "system",
      "group",  "number", "part",   "point",  "result", "matter",
      "order",  "side",   "level",  "form",   "line",   "story"};
  return kWords;
}

const std::vector<std::string>& function_words() {
  static const std::vector<std::string> kWords = {
      "the", "of", "and", "to", "in", "is", "that", "for", "with", "on"};
  return kWords;
}

const std::vector<std::string>& parent_names() {
  static const std::vector<std::string> kParents = {"fauna", "flora"};
  return kParents;
}

constexpr ClassId kParentBase = 100;

std::vector<float> gaussian(std::size_t d, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, scale / std::sqrt(double(d)));
  std::vector<float> v(d);
  for (auto& x : v) x = static_cast<float>(normal(rng));
  return v;
}

}  // namespace

std::string SyntheticWorld::topic_word(std::size_t class_index,
                                       std::size_t role) const {
  return classes[class_index].one_word_label + role_syllables()[role];
}

SyntheticWorld make_synthetic_world(const SyntheticWorldOptions& o) {
  if (o.classes < 2 || o.classes > class_names().size()) {
    throw Error("synthetic world: unsupported class count");
  }
  if (o.roles == 0 || o.roles > role_syllables().size()) {
    throw Error("synthetic world: unsupported role count");
  }
  SyntheticWorld w;
  Rng rng(o.seed);
  const std::size_t d = o.dimension;

  std::vector<std::vector<float>> label_vec;
  for (std::size_t c = 0; c < o.classes; ++c) {
    ClassMeta meta;
    meta.class_id = static_cast<ClassId>(c + 1);
    meta.label = class_names()[c];
    meta.one_word_label = class_names()[c];
    meta.parent = kParentBase + static_cast<ClassId>(c % 2);
    meta.description = fmt::format("a {} of {} and {}", parent_names()[c % 2],
                                   meta.label + role_syllables()[0],
                                   meta.label + role_syllables()[2]);
    w.classes.push_back(meta);
    w.dataset_classes.push_back(meta.class_id);
    label_vec.push_back(gaussian(d, 1.0, rng));
  }
  for (std::size_t p = 0; p < parent_names().size(); ++p) {
    ClassMeta meta;
    meta.class_id = kParentBase + static_cast<ClassId>(p);
    meta.label = parent_names()[p];
    meta.one_word_label = parent_names()[p];
    meta.description = "a broad group";
    w.classes.push_back(meta);
  }

  std::vector<std::vector<float>> role_vec;
  for (std::size_t r = 0; r < o.roles; ++r) role_vec.push_back(gaussian(d, 1.0, rng));

  auto add_word = [&](std::string word, std::vector<float> v, PosTag tag) {
    w.words.push_back(word);
    w.vectors.push_back(std::move(v));
    w.lexicon.emplace_back(std::move(word), tag, std::vector<PosTag>{});
  };

  for (std::size_t c = 0; c < o.classes; ++c) {
    add_word(w.classes[c].one_word_label, label_vec[c], PosTag::kNoun);
  }
  for (const auto& p : parent_names()) add_word(p, gaussian(d, 1.0, rng), PosTag::kNoun);
  add_word("group", gaussian(d, 1.0, rng), PosTag::kNoun);
  add_word("broad", gaussian(d, 1.0, rng), PosTag::kAdj);
  for (std::size_t c = 0; c < o.classes; ++c) {
    for (std::size_t r = 0; r < o.roles; ++r) {
      auto v = gaussian(d, o.noise, rng);
      for (std::size_t i = 0; i < d; ++i) v[i] += label_vec[c][i] + role_vec[r][i];
      add_word(w.topic_word(c, r), std::move(v),
               r % 2 == 0 ? PosTag::kNoun : PosTag::kVerb);
    }
  }
  for (const auto& word : common_words()) {
    if (word == "group") continue;
    add_word(word, gaussian(d, 1.0, rng), PosTag::kNoun);
  }
  for (const auto& word : function_words()) {
    add_word(word, gaussian(d, 1.0, rng), PosTag::kOther);
  }
  add_word("a", gaussian(d, 1.0, rng), PosTag::kOther);

  // Graph.
  for (std::size_t c = 0; c < o.classes; ++c) {
    const auto& label = w.classes[c].one_word_label;
    for (std::size_t r = 0; r < o.roles; ++r) {
      w.edges.emplace_back("RelatedTo", w.topic_word(c, r), label);
    }
    w.edges.emplace_back("IsA", label, parent_names()[c % 2]);
    w.edges.emplace_back("Antonym", label,
                         w.classes[(c + 1) % o.classes].one_word_label);
  }
  for (std::size_t i = 0; i + 1 < common_words().size(); i += 2) {
    w.edges.emplace_back("RelatedTo", common_words()[i], common_words()[i + 1]);
  }
  w.edges.emplace_back("PartOf", common_words()[0], parent_names()[0]);

  // Documents.
  std::bernoulli_distribution label_mention(0.03);
  for (std::size_t c = 0; c < o.classes; ++c) {
    for (std::size_t n = 0; n < o.docs_per_class; ++n) {
      std::string text;
      for (std::size_t t = 0; t < o.doc_length; ++t) {
        const double u = uniform_unit(rng);
        std::string word;
        if (label_mention(rng)) {
          word = w.classes[c].one_word_label;
        } else if (u < o.topic_share) {
          word = w.topic_word(c, uniform_index(rng, o.roles));
        } else if (u < o.topic_share + o.confusion_share) {
          const std::size_t other =
              (c + 1 + uniform_index(rng, o.classes - 1)) % o.classes;
          word = w.topic_word(other, uniform_index(rng, o.roles));
        } else if (uniform_unit(rng) < 0.5) {
          word = common_words()[uniform_index(rng, common_words().size())];
        } else {
          word = function_words()[uniform_index(rng, function_words().size())];
        }
        if (!text.empty()) text += ' ';
        text += word;
      }
      w.documents.emplace_back(w.classes[c].class_id, std::move(text));
    }
  }
  return w;
}

EmbeddingStore SyntheticWorld::store() const {
  EmbeddingStore s(vectors.front().size());
  for (std::size_t i = 0; i < words.size(); ++i) s.add(words[i], vectors[i]);
  return s;
}

PosLexicon SyntheticWorld::pos_lexicon() const {
  PosLexicon lex;
  for (const auto& [word, tag, tags] : lexicon) lex.add(word, tag, tags);
  return lex;
}

LabeledCorpus SyntheticWorld::corpus() const {
  LabeledCorpus out;
  out.classes = classes;
  std::size_t n = 0;
  for (const auto& [id, text] : documents) {
    out.documents.push_back(
        Document{fmt::format("doc-{}", n++), tokenize(text), id});
  }
  return out;
}

void SyntheticWorld::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::string csv = "class_id,label,one_word_label,description,parent_id\n";
  for (const auto& c : classes) {
    csv += csv_join({std::to_string(c.class_id), c.label, c.one_word_label,
                     c.description,
                     c.parent ? std::to_string(*c.parent) : std::string()});
    csv += '\n';
  }
  write_file(dir / "classes.csv", csv);

  std::string tsv;
  for (const auto& [id, text] : documents) tsv += fmt::format("{}\t{}\n", id, text);
  write_file(dir / "corpus.tsv", tsv);

  std::string vec;
  for (std::size_t i = 0; i < words.size(); ++i) {
    vec += words[i];
    for (float x : vectors[i]) vec += fmt::format(" {:.6f}", x);
    vec += '\n';
  }
  write_file(dir / "vectors.txt", vec);

  std::string lex;
  for (const auto& [word, tag, tags] : lexicon) {
    lex += fmt::format("{}\t{}\t{}\n", word, to_string(tag), to_string(tag));
  }
  write_file(dir / "lexicon.tsv", lex);

  std::string edge_text;
  for (const auto& [rel, a, b] : edges) {
    edge_text += fmt::format("/r/{}\t/c/en/{}\t/c/en/{}\n", rel, a, b);
  }
  write_file(dir / "edges.tsv", edge_text);

  write_file(dir / "config.ini", synthetic_config());
}

std::string synthetic_config(std::size_t partitions, double unseen_rate) {
  return fmt::format(R"([data]
format = tsv
corpus = corpus.tsv
classes = classes.csv
embeddings = vectors.txt
graph = edges.tsv
lexicon = lexicon.tsv
max_length = 32
train_fraction = 0.7

[experiment]
workdir = work
seed = 11
partitions = {}
unseen_rate = {}
workers = 1

[augment]
per_unseen = 20
top_k = 5

[features]
k = 2

[phase1]
filter_sizes = 2,3
filters = 8
dense = 8
epochs = 6
batch_size = 16
learning_rate = 0.01
patience = 3
negative_ratio = 2
alpha = 3

[phase2]
filter_sizes = 2,3
filters = 8
dense = 8
epochs = 6
batch_size = 16
learning_rate = 0.01
patience = 3
negative_ratio = 1
input = v_w+v_c+v_wc

[ablation]
augmentation = true
inputs = v_wc, v_w+v_c
negative_ratios = 2
)",
                     partitions, unseen_rate);
}

}  // namespace zsl::testing
