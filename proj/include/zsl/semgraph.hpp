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

// Knowledge-graph features: class node sets and word-to-class relationship
// vectors built from bounded-hop shortest paths.

#ifndef ZSL_SEMGRAPH_HPP_
#define ZSL_SEMGRAPH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zsl/augment.hpp"
#include "zsl/corpus.hpp"

namespace zsl {

using NodeId = std::uint32_t;

// Relations kept by default.
const std::set<std::string>& default_relations();

// Lowercases, maps spaces to underscores and reduces ConceptNet URIs
// (`/c/en/sea_snail/n`) to the bare term.
std::string normalize_node(std::string_view name);

// Undirected, deduplicated, self-loop free adjacency in CSR form.
class KnowledgeGraph {
 public:
  class Builder {
   public:
    NodeId intern(std::string_view name);
    // Returns false for self loops.
    bool add_edge(std::string_view a, std::string_view b);
    KnowledgeGraph build() &&;

   private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> ids_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
  };

  struct LoadStats {
    std::size_t lines = 0;
    std::size_t kept = 0;
    std::size_t filtered = 0;
  };

  // `relation<TAB>start<TAB>end` per line; relation names may carry the
  // ConceptNet `/r/` prefix.
  static KnowledgeGraph load(
      const std::filesystem::path& path,
      const std::set<std::string>& allowed = default_relations(),
      LoadStats* stats = nullptr);

  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::optional<NodeId> find(std::string_view name) const;
  const std::string& name(NodeId id) const { return names_[id]; }
  std::span<const NodeId> neighbors(NodeId id) const {
    return {targets_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::size_t edge_count_ = 0;
};

// Breadth-first search truncated at a hop limit, reusing its buffers.
class BoundedBfs {
 public:
  explicit BoundedBfs(const KnowledgeGraph& graph);

  // Visits every node within `max_hops` of `source` (the source at 0).
  void run(NodeId source, int max_hops);

  // Distance from the last source, or -1 if beyond the hop limit.
  int distance(NodeId node) const { return distance_[node]; }
  const std::vector<NodeId>& visited() const { return visited_; }

 private:
  const KnowledgeGraph& graph_;
  std::vector<int> distance_;
  std::vector<NodeId> visited_;
};

struct ClassNodeSets {
  std::vector<NodeId> class_nodes;
  std::vector<NodeId> superclass_nodes;
  std::vector<NodeId> description_nodes;

  std::span<const NodeId> set(std::size_t which) const;
};

// class_nodes: full label plus each label token; superclass_nodes: the label
// of every ancestor; description_nodes: description words the lexicon tags as
// nouns. Names missing from the graph are dropped; each set is sorted and
// deduplicated.
ClassNodeSets class_node_sets(const ClassMeta& meta,
                              const ClassHierarchy& hierarchy,
                              const PosLexicon& lexicon,
                              const KnowledgeGraph& graph);

// Shortest-path lengths in [1, K] from `word` to each member of `nodes`,
// ascending. Members at distance 0 or beyond K contribute nothing.
std::vector<int> hops_within_k(std::string_view word,
                               std::span<const NodeId> nodes, int k,
                               const KnowledgeGraph& graph);

using RelationshipVector = std::vector<float>;

constexpr std::size_t relationship_block_size(int k) {
  return 3 * static_cast<std::size_t>(k) + 1;
}
constexpr std::size_t relationship_dimension(int k) {
  return 3 * relationship_block_size(k);
}

// Per node set (class, superclass, description): [membership, then for each
// hop h = 1..K: any-at-h, count-at-h, count-at-h / |set|].
RelationshipVector relationship_vector(std::string_view word,
                                       const ClassNodeSets& sets, int k,
                                       const KnowledgeGraph& graph);

// Fills the block of one set from a completed BFS rooted at the word.
void fill_relationship_block(const BoundedBfs& bfs, std::optional<NodeId> word,
                             std::span<const NodeId> nodes, int k,
                             std::span<float> block);

// Dense v_{w,c} table over vocabulary x classes.
class FeatureTable {
 public:
  static FeatureTable build(const Vocabulary& vocabulary,
                            std::span<const ClassId> classes,
                            std::span<const ClassNodeSets> sets, int k,
                            const KnowledgeGraph& graph,
                            std::size_t workers = 1);

  int k() const { return k_; }
  std::size_t dimension() const { return relationship_dimension(k_); }
  const std::vector<ClassId>& classes() const { return classes_; }
  const std::vector<std::string>& words() const { return words_; }
  std::uint64_t vocabulary_hash() const { return vocabulary_hash_; }

  // All-zero for words or classes outside the table.
  std::span<const float> lookup(std::size_t word_index, ClassId class_id) const;
  std::span<const float> lookup(std::string_view word, ClassId class_id) const;

  // True if built for exactly this vocabulary, class list and K.
  bool matches(const Vocabulary& vocabulary, std::span<const ClassId> classes,
               int k) const;

  void save(const std::filesystem::path& path) const;
  static FeatureTable load(const std::filesystem::path& path);

  bool operator==(const FeatureTable& other) const = default;

 private:
  int k_ = 3;
  std::uint64_t vocabulary_hash_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> word_index_;
  std::vector<ClassId> classes_;
  std::unordered_map<ClassId, std::size_t> class_index_;
  std::vector<float> values_;  // [word][class][dimension]
  std::vector<float> zeros_;
};

}  // namespace zsl

#endif  // ZSL_SEMGRAPH_HPP_
