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

#include "zsl/semgraph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace zsl {
namespace {

constexpr char kFeatureMagic[8] = {'Z', 'S', 'L', 'F', 'E', 'A', 'T', '1'};

std::string relation_name(std::string_view field) {
  field = trim(field);
  if (field.rfind("/r/", 0) == 0) field.remove_prefix(3);
  return std::string(field);
}

std::string label_node(std::string_view label) {
  std::string joined;
  for (const auto& token : tokenize(label)) {
    if (!joined.empty()) joined += '_';
    joined += token;
  }
  return joined;
}

void add_if_present(const KnowledgeGraph& graph, std::string_view name,
                    std::vector<NodeId>& out) {
  if (name.empty()) return;
  if (auto id = graph.find(name)) out.push_back(*id);
}

void sort_unique(std::vector<NodeId>& nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
}

}  // namespace

const std::set<std::string>& default_relations() {
  static const std::set<std::string> relations = {"RelatedTo", "IsA", "PartOf",
                                                  "AtLocation"};
  return relations;
}

std::string normalize_node(std::string_view name) {
  name = trim(name);
  if (name.rfind("/c/", 0) == 0) {
    // /c/<lang>/<term>[/<pos>[/...]]
    const auto parts = split(name, '/');
    return parts.size() > 3 ? normalize_node(parts[3]) : std::string();
  }
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == ' ') {
      out.push_back('_');
    } else if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c + 32));
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// --- KnowledgeGraph ---------------------------------------------------------------

NodeId KnowledgeGraph::Builder::intern(std::string_view name) {
  std::string key(name);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<NodeId>(names_.size());
  names_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

bool KnowledgeGraph::Builder::add_edge(std::string_view a, std::string_view b) {
  const NodeId x = intern(a);
  const NodeId y = intern(b);
  if (x == y) return false;
  edges_.emplace_back(std::min(x, y), std::max(x, y));
  return true;
}

KnowledgeGraph KnowledgeGraph::Builder::build() && {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  KnowledgeGraph graph;
  graph.names_ = std::move(names_);
  graph.ids_ = std::move(ids_);
  graph.edge_count_ = edges_.size();
  std::vector<std::size_t> degree(graph.names_.size() + 1, 0);
  for (const auto& [a, b] : edges_) {
    ++degree[a];
    ++degree[b];
  }
  graph.offsets_.assign(graph.names_.size() + 1, 0);
  for (std::size_t i = 0; i < graph.names_.size(); ++i) {
    graph.offsets_[i + 1] = graph.offsets_[i] + degree[i];
  }
  graph.targets_.resize(graph.offsets_.back());
  std::vector<std::size_t> fill(graph.offsets_.begin(),
                                graph.offsets_.end() - 1);
  for (const auto& [a, b] : edges_) {
    graph.targets_[fill[a]++] = b;
    graph.targets_[fill[b]++] = a;
  }
  for (std::size_t i = 0; i < graph.names_.size(); ++i) {
    std::sort(graph.targets_.begin() + graph.offsets_[i],
              graph.targets_.begin() + graph.offsets_[i + 1]);
  }
  edges_.clear();
  return graph;
}

KnowledgeGraph KnowledgeGraph::load(const std::filesystem::path& path,
                                    const std::set<std::string>& allowed,
                                    LoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  Builder builder;
  LoadStats local;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ++local.lines;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(path, line_number,
                       "expected relation<TAB>start<TAB>end, got " +
                           std::to_string(fields.size()) + " fields");
    }
    const std::string start = normalize_node(fields[1]);
    const std::string end = normalize_node(fields[2]);
    if (fields[0].empty() || start.empty() || end.empty()) {
      throw ParseError(path, line_number, "empty relation or node");
    }
    if (!allowed.count(relation_name(fields[0]))) {
      ++local.filtered;
      continue;
    }
    builder.add_edge(start, end);
    ++local.kept;
  }
  KnowledgeGraph graph = std::move(builder).build();
  spdlog::info("graph {}: {} nodes, {} edges ({} lines filtered by relation)",
               path.string(), graph.node_count(), graph.edge_count(),
               local.filtered);
  if (stats) *stats = local;
  return graph;
}

std::optional<NodeId> KnowledgeGraph::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

// --- BFS ------------------------------------------------------------------------------

BoundedBfs::BoundedBfs(const KnowledgeGraph& graph)
    : graph_(graph), distance_(graph.node_count(), -1) {}

void BoundedBfs::run(NodeId source, int max_hops) {
  for (NodeId node : visited_) distance_[node] = -1;
  visited_.clear();
  distance_[source] = 0;
  visited_.push_back(source);
  for (std::size_t head = 0; head < visited_.size(); ++head) {
    const NodeId node = visited_[head];
    const int d = distance_[node];
    if (d >= max_hops) continue;
    for (NodeId next : graph_.neighbors(node)) {
      if (distance_[next] != -1) continue;
      distance_[next] = d + 1;
      visited_.push_back(next);
    }
  }
}

// --- Node sets and relationship vectors ---------------------------------------------

std::span<const NodeId> ClassNodeSets::set(std::size_t which) const {
  switch (which) {
    case 0:
      return class_nodes;
    case 1:
      return superclass_nodes;
    case 2:
      return description_nodes;
  }
  throw Error("ClassNodeSets: set index out of range");
}

ClassNodeSets class_node_sets(const ClassMeta& meta,
                              const ClassHierarchy& hierarchy,
                              const PosLexicon& lexicon,
                              const KnowledgeGraph& graph) {
  ClassNodeSets sets;
  const auto label_tokens = tokenize(meta.label);
  add_if_present(graph, label_node(meta.label), sets.class_nodes);
  if (label_tokens.size() > 1) {
    for (const auto& token : label_tokens) {
      add_if_present(graph, token, sets.class_nodes);
    }
  }
  for (ClassId ancestor : hierarchy.ancestors(meta.class_id)) {
    add_if_present(graph, label_node(hierarchy.at(ancestor).label),
                   sets.superclass_nodes);
  }
  for (const auto& token : tokenize(meta.description)) {
    if (lexicon.primary(token) == PosTag::kNoun) {
      add_if_present(graph, token, sets.description_nodes);
    }
  }
  sort_unique(sets.class_nodes);
  sort_unique(sets.superclass_nodes);
  sort_unique(sets.description_nodes);
  if (sets.class_nodes.empty() || sets.description_nodes.empty()) {
    spdlog::debug("class '{}': {} class nodes, {} superclass nodes, {} "
                  "description nodes",
                  meta.label, sets.class_nodes.size(),
                  sets.superclass_nodes.size(), sets.description_nodes.size());
  }
  return sets;
}

std::vector<int> hops_within_k(std::string_view word,
                               std::span<const NodeId> nodes, int k,
                               const KnowledgeGraph& graph) {
  if (k < 1) throw Error("hops_within_k: K must be at least 1");
  std::vector<int> hops;
  auto source = graph.find(word);
  if (!source) return hops;
  BoundedBfs bfs(graph);
  bfs.run(*source, k);
  for (NodeId node : nodes) {
    const int d = bfs.distance(node);
    if (d >= 1) hops.push_back(d);
  }
  std::sort(hops.begin(), hops.end());
  return hops;
}

void fill_relationship_block(const BoundedBfs& bfs, std::optional<NodeId> word,
                             std::span<const NodeId> nodes, int k,
                             std::span<float> block) {
  std::fill(block.begin(), block.end(), 0.0f);
  if (nodes.empty() || !word) return;
  std::vector<int> counts(static_cast<std::size_t>(k) + 1, 0);
  for (NodeId node : nodes) {
    const int d = bfs.distance(node);
    if (d == 0) {
      block[0] = 1.0f;
    } else if (d >= 1 && d <= k) {
      ++counts[d];
    }
  }
  const auto size = static_cast<float>(nodes.size());
  for (int h = 1; h <= k; ++h) {
    const std::size_t base = 3 * static_cast<std::size_t>(h - 1);
    block[base + 1] = counts[h] > 0 ? 1.0f : 0.0f;
    block[base + 2] = static_cast<float>(counts[h]);
    block[base + 3] = static_cast<float>(counts[h]) / size;
  }
}

RelationshipVector relationship_vector(std::string_view word,
                                       const ClassNodeSets& sets, int k,
                                       const KnowledgeGraph& graph) {
  if (k < 1) throw Error("relationship_vector: K must be at least 1");
  RelationshipVector v(relationship_dimension(k), 0.0f);
  auto source = graph.find(word);
  if (!source) return v;
  BoundedBfs bfs(graph);
  bfs.run(*source, k);
  const std::size_t block = relationship_block_size(k);
  for (std::size_t s = 0; s < 3; ++s) {
    fill_relationship_block(bfs, source, sets.set(s), k,
                            std::span<float>(v).subspan(s * block, block));
  }
  return v;
}

// --- FeatureTable ---------------------------------------------------------------------

FeatureTable FeatureTable::build(const Vocabulary& vocabulary,
                                 std::span<const ClassId> classes,
                                 std::span<const ClassNodeSets> sets, int k,
                                 const KnowledgeGraph& graph,
                                 std::size_t workers) {
  if (k < 1) throw Error("FeatureTable: K must be at least 1");
  if (classes.size() != sets.size()) {
    throw Error("FeatureTable: one node-set triple per class required");
  }
  FeatureTable table;
  table.k_ = k;
  table.vocabulary_hash_ = vocabulary.hash();
  table.words_ = vocabulary.words();
  table.classes_.assign(classes.begin(), classes.end());
  for (std::size_t w = 0; w < table.words_.size(); ++w) {
    table.word_index_.emplace(table.words_[w], w);
  }
  for (std::size_t c = 0; c < table.classes_.size(); ++c) {
    table.class_index_.emplace(table.classes_[c], c);
  }
  const std::size_t dim = table.dimension();
  const std::size_t block = relationship_block_size(k);
  table.zeros_.assign(dim, 0.0f);
  table.values_.assign(table.words_.size() * classes.size() * dim, 0.0f);

  // Contiguous word ranges per worker so each owns one BFS buffer.
  const std::size_t chunks = std::max<std::size_t>(1, workers);
  const std::size_t per_chunk = (table.words_.size() + chunks - 1) / chunks;
  parallel_for(chunks, workers, [&](std::size_t chunk) {
    BoundedBfs bfs(graph);
    const std::size_t begin = chunk * per_chunk;
    const std::size_t end = std::min(table.words_.size(), begin + per_chunk);
    for (std::size_t w = begin; w < end; ++w) {
      auto source = graph.find(table.words_[w]);
      if (!source) continue;
      bfs.run(*source, k);
      for (std::size_t c = 0; c < sets.size(); ++c) {
        float* row = table.values_.data() + (w * sets.size() + c) * dim;
        for (std::size_t s = 0; s < 3; ++s) {
          fill_relationship_block(bfs, source, sets[c].set(s), k,
                                  std::span<float>(row + s * block, block));
        }
      }
    }
  });
  return table;
}

std::span<const float> FeatureTable::lookup(std::size_t word_index,
                                            ClassId class_id) const {
  auto c = class_index_.find(class_id);
  if (word_index >= words_.size() || c == class_index_.end()) return zeros_;
  const std::size_t dim = dimension();
  return {values_.data() + (word_index * classes_.size() + c->second) * dim,
          dim};
}

std::span<const float> FeatureTable::lookup(std::string_view word,
                                            ClassId class_id) const {
  auto w = word_index_.find(std::string(word));
  if (w == word_index_.end()) return zeros_;
  return lookup(w->second, class_id);
}

bool FeatureTable::matches(const Vocabulary& vocabulary,
                           std::span<const ClassId> classes, int k) const {
  return k == k_ && vocabulary.hash() == vocabulary_hash_ &&
         vocabulary.size() == words_.size() &&
         std::equal(classes.begin(), classes.end(), classes_.begin(),
                    classes_.end());
}

void FeatureTable::save(const std::filesystem::path& path) const {
  nlohmann::json header = {{"k", k_},
                           {"dimension", dimension()},
                           {"vocabulary_hash", vocabulary_hash_},
                           {"classes", classes_},
                           {"words", words_}};
  const std::string text = header.dump();
  const std::uint64_t length = text.size();
  std::string out(kFeatureMagic, sizeof(kFeatureMagic));
  out.append(reinterpret_cast<const char*>(&length), sizeof(length));
  out += text;
  out.append(reinterpret_cast<const char*>(values_.data()),
             values_.size() * sizeof(float));
  write_file(path, out);
}

FeatureTable FeatureTable::load(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  std::uint64_t length = 0;
  if (data.size() < sizeof(kFeatureMagic) + sizeof(length) ||
      std::memcmp(data.data(), kFeatureMagic, sizeof(kFeatureMagic)) != 0) {
    throw Error(path.string() + ": not a feature cache");
  }
  std::memcpy(&length, data.data() + sizeof(kFeatureMagic), sizeof(length));
  const std::size_t body = sizeof(kFeatureMagic) + sizeof(length);
  if (data.size() < body + length) throw Error(path.string() + ": truncated");
  const auto header = nlohmann::json::parse(data.substr(body, length));
  FeatureTable table;
  table.k_ = header.at("k").get<int>();
  table.vocabulary_hash_ = header.at("vocabulary_hash").get<std::uint64_t>();
  table.classes_ = header.at("classes").get<std::vector<ClassId>>();
  table.words_ = header.at("words").get<std::vector<std::string>>();
  for (std::size_t w = 0; w < table.words_.size(); ++w) {
    table.word_index_.emplace(table.words_[w], w);
  }
  for (std::size_t c = 0; c < table.classes_.size(); ++c) {
    table.class_index_.emplace(table.classes_[c], c);
  }
  const std::size_t dim = table.dimension();
  const std::size_t count = table.words_.size() * table.classes_.size() * dim;
  if (data.size() != body + length + count * sizeof(float)) {
    throw Error(path.string() + ": payload size does not match header");
  }
  table.values_.resize(count);
  std::memcpy(table.values_.data(), data.data() + body + length,
              count * sizeof(float));
  table.zeros_.assign(dim, 0.0f);
  return table;
}

}  // namespace zsl
