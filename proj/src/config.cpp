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

#include "zsl/config.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace zsl {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

ZeroShotInput parse_zeroshot_input_alias(const std::string& name) {
  std::string canonical = name;
  for (char& ch : canonical) {
    if (ch == '+') ch = ';';
  }
  return parse_zeroshot_input(canonical);
}

namespace {

std::string alias(ZeroShotInput input) {
  std::string s = to_string(input);
  for (char& ch : s) {
    if (ch == ';') ch = '+';
  }
  return s;
}

// Reads typed values and remembers which keys were consumed so unknown keys
// can be reported.
class Reader {
 public:
  Reader(const pt::ptree& tree, fs::path base)
      : tree_(tree), base_(std::move(base)) {}

  template <typename T>
  void read(const std::string& section, const std::string& key, T& out) {
    const auto text = raw(section, key);
    if (!text) return;
    out = convert<T>(section, key, *text);
  }

  void read_path(const std::string& section, const std::string& key,
                 fs::path& out) {
    const auto text = raw(section, key);
    if (!text) return;
    out = resolve(*text);
  }

  void read_paths(const std::string& section, const std::string& key,
                  std::vector<fs::path>& out) {
    const auto text = raw(section, key);
    if (!text) return;
    out.clear();
    for (const auto& item : split(*text, ',')) {
      const auto trimmed = std::string(trim(item));
      if (!trimmed.empty()) out.push_back(resolve(trimmed));
    }
  }

  template <typename T>
  void read_list(const std::string& section, const std::string& key,
                 std::vector<T>& out) {
    const auto text = raw(section, key);
    if (!text) return;
    out.clear();
    for (const auto& item : split(*text, ',')) {
      const auto trimmed = std::string(trim(item));
      if (!trimmed.empty()) out.push_back(convert<T>(section, key, trimmed));
    }
  }

  void check_unknown() const {
    for (const auto& [section, keys] : tree_) {
      if (keys.empty()) {
        throw Error(fmt::format("config: top-level key '{}' outside a section",
                                section));
      }
      for (const auto& [key, value] : keys) {
        if (!used_.count(section + "." + key)) {
          throw Error(fmt::format("config: unknown key [{}] {}", section, key));
        }
      }
    }
  }

 private:
  std::optional<std::string> raw(const std::string& section,
                                 const std::string& key) {
    const auto child = tree_.get_child_optional(
        pt::ptree::path_type(section + "." + key, '.'));
    if (!child) return std::nullopt;
    used_.insert(section + "." + key);
    return std::string(trim(child->data()));
  }

  fs::path resolve(const std::string& text) const {
    if (text.empty()) return {};
    fs::path p(text);
    return p.is_absolute() ? p : (base_ / p).lexically_normal();
  }

  template <typename T>
  T convert(const std::string& section, const std::string& key,
            const std::string& text) const {
    const auto fail = [&]() -> Error {
      return Error(fmt::format("config: [{}] {} has invalid value '{}'",
                               section, key, text));
    };
    if constexpr (std::is_same_v<T, std::string>) {
      return text;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (text == "true" || text == "yes" || text == "on" || text == "1") {
        return true;
      }
      if (text == "false" || text == "no" || text == "off" || text == "0") {
        return false;
      }
      throw fail();
    } else if constexpr (std::is_same_v<T, ZeroShotInput>) {
      try {
        return parse_zeroshot_input_alias(text);
      } catch (const Error&) {
        throw fail();
      }
    } else if constexpr (std::is_same_v<T, LabelAggregation>) {
      try {
        return parse_label_aggregation(text);
      } catch (const Error&) {
        throw fail();
      }
    } else {
      T value{};
      const auto result =
          std::from_chars(text.data(), text.data() + text.size(), value);
      if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
        throw fail();
      }
      return value;
    }
  }

  const pt::ptree& tree_;
  fs::path base_;
  std::set<std::string> used_;
};

void read_network(Reader& r, const std::string& section, NetworkSection& n) {
  r.read_list(section, "filter_sizes", n.filter_sizes);
  r.read(section, "filters", n.filters);
  r.read_list(section, "dense", n.dense);
  r.read(section, "dropout", n.dropout);
  r.read(section, "epochs", n.train.epochs);
  r.read(section, "batch_size", n.train.batch_size);
  r.read(section, "learning_rate", n.train.adam.learning_rate);
  r.read(section, "validation_fraction", n.train.validation_fraction);
  r.read(section, "patience", n.train.patience);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, fs::path>) {
      out += values[i].string();
    } else if constexpr (std::is_same_v<T, ZeroShotInput>) {
      out += alias(values[i]);
    } else {
      out += fmt::format("{}", values[i]);
    }
  }
  return out;
}

void write_network(std::ostringstream& out, const NetworkSection& n) {
  out << "filter_sizes = " << join(n.filter_sizes) << "\n"
      << "filters = " << n.filters << "\n"
      << "dense = " << join(n.dense) << "\n"
      << "dropout = " << fmt::format("{}", n.dropout) << "\n"
      << "epochs = " << n.train.epochs << "\n"
      << "batch_size = " << n.train.batch_size << "\n"
      << "learning_rate = " << fmt::format("{}", n.train.adam.learning_rate)
      << "\n"
      << "validation_fraction = "
      << fmt::format("{}", n.train.validation_fraction) << "\n"
      << "patience = " << n.train.patience << "\n";
}

neural::TextCnnConfig network_config(const NetworkSection& n,
                                     std::size_t input_dim) {
  neural::TextCnnConfig c;
  c.input_dim = input_dim;
  c.filter_sizes = n.filter_sizes;
  c.filters_per_size = n.filters;
  c.dense_units = n.dense;
  c.dropout = n.dropout;
  return c;
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text,
                                         const fs::path& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.filename().empty() ? fs::path("<config>") : fs::path(e.filename()),
                     e.line(), e.message());
  }
  ExperimentConfig c;
  Reader r(tree, base_dir);

  r.read("data", "format", c.data.format);
  r.read_paths("data", "corpus", c.data.corpus);
  r.read_path("data", "classes", c.data.classes);
  r.read_path("data", "embeddings", c.data.embeddings);
  r.read("data", "embedding_max_words", c.data.embedding_max_words);
  r.read_path("data", "graph", c.data.graph);
  r.read_path("data", "lexicon", c.data.lexicon);
  r.read("data", "max_per_class", c.data.max_per_class);
  r.read("data", "include_title", c.data.include_title);
  r.read("data", "strip_headers", c.data.strip_headers);
  r.read("data", "max_length", c.data.max_length);
  r.read("data", "vocabulary_size", c.data.vocabulary_size);
  r.read("data", "train_fraction", c.data.train_fraction);

  r.read_path("experiment", "workdir", c.experiment.workdir);
  r.read("experiment", "seed", c.experiment.seed);
  r.read("experiment", "partitions", c.experiment.partitions);
  r.read("experiment", "unseen_rate", c.experiment.unseen_rate);
  r.read("experiment", "workers", c.experiment.workers);
  r.read("experiment", "parallel_partitions", c.experiment.parallel_partitions);

  r.read("augment", "enabled", c.augment.enabled);
  r.read("augment", "per_unseen", c.augment.per_unseen);
  r.read("augment", "top_k", c.augment.top_k);
  r.read("augment", "epsilon", c.augment.analogy.epsilon);
  r.read("augment", "shift_cosines", c.augment.analogy.shift_cosines);

  r.read("features", "k", c.features.k);
  r.read_list("features", "relations", c.features.relations);

  read_network(r, "phase1", c.phase1.network);
  r.read("phase1", "negative_ratio", c.phase1.negative_ratio);
  r.read("phase1", "alpha", c.phase1.alpha);

  read_network(r, "phase2", c.phase2.network);
  r.read("phase2", "negative_ratio", c.phase2.negative_ratio);
  r.read("phase2", "input", c.phase2.input);

  r.read("ablation", "augmentation", c.ablation.augmentation);
  r.read_list("ablation", "inputs", c.ablation.inputs);
  r.read_list("ablation", "negative_ratios", c.ablation.negative_ratios);

  r.read("baselines", "enabled", c.baselines.enabled);
  r.read("baselines", "aggregation", c.baselines.aggregation);
  r.read("baselines", "restrict_unseen", c.baselines.restrict_unseen);

  r.check_unknown();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  const fs::path base = path.has_parent_path()
                            ? fs::absolute(path).parent_path()
                            : fs::current_path();
  try {
    return parse(read_file(path), base);
  } catch (const ParseError& e) {
    throw ParseError(path, e.line(), e.what());
  }
}

void ExperimentConfig::validate() const {
  const auto need = [](const fs::path& p, const char* what) {
    if (p.empty()) throw Error(fmt::format("config: {} is not set", what));
    if (!fs::exists(p)) {
      throw Error(fmt::format("config: {} '{}' does not exist", what, p.string()));
    }
  };
  static const std::set<std::string> kFormats = {"newsgroups", "dbpedia", "tsv",
                                                 "tokenized"};
  if (!kFormats.count(data.format)) {
    throw Error("config: unknown data format '" + data.format + "'");
  }
  if (data.corpus.empty()) throw Error("config: data corpus is not set");
  for (const auto& p : data.corpus) need(p, "corpus");
  need(data.classes, "classes");
  need(data.embeddings, "embeddings");
  need(data.lexicon, "lexicon");
  need(data.graph, "graph");
  if (data.max_length == 0) throw Error("config: max_length must be >= 1");
  if (data.vocabulary_size == 0) {
    throw Error("config: vocabulary_size must be >= 1");
  }
  if (!(data.train_fraction > 0.0 && data.train_fraction <= 1.0)) {
    throw Error("config: train_fraction must lie in (0, 1]");
  }
  if (!(experiment.unseen_rate > 0.0 && experiment.unseen_rate < 1.0)) {
    throw Error("config: unseen_rate must lie in (0, 1)");
  }
  if (experiment.partitions == 0) throw Error("config: partitions must be >= 1");
  if (augment.per_unseen == 0) throw Error("config: per_unseen must be >= 1");
  if (augment.top_k == 0) throw Error("config: top_k must be >= 1");
  if (features.k < 1) throw Error("config: k must be >= 1");
  if (phase1.negative_ratio < 0.0) {
    throw Error("config: phase1 negative_ratio must be >= 0");
  }
  if (phase2.negative_ratio == 0) {
    throw Error("config: phase2 negative_ratio must be >= 1");
  }
  for (std::size_t r : ablation.negative_ratios) {
    if (r == 0) throw Error("config: ablation negative_ratios must be >= 1");
  }
  phase1_cnn(200).validate();
  traditional_cnn(200, 2).validate();
  zeroshot_cnn(430).validate();
}

std::string ExperimentConfig::to_ini() const {
  std::ostringstream out;
  out << "[data]\n"
      << "format = " << data.format << "\n"
      << "corpus = " << join(data.corpus) << "\n"
      << "classes = " << data.classes.string() << "\n"
      << "embeddings = " << data.embeddings.string() << "\n"
      << "embedding_max_words = " << data.embedding_max_words << "\n"
      << "graph = " << data.graph.string() << "\n"
      << "lexicon = " << data.lexicon.string() << "\n"
      << "max_per_class = " << data.max_per_class << "\n"
      << "include_title = " << bool_text(data.include_title) << "\n"
      << "strip_headers = " << bool_text(data.strip_headers) << "\n"
      << "max_length = " << data.max_length << "\n"
      << "vocabulary_size = " << data.vocabulary_size << "\n"
      << "train_fraction = " << fmt::format("{}", data.train_fraction) << "\n"
      << "\n[experiment]\n"
      << "workdir = " << experiment.workdir.string() << "\n"
      << "seed = " << experiment.seed << "\n"
      << "partitions = " << experiment.partitions << "\n"
      << "unseen_rate = " << fmt::format("{}", experiment.unseen_rate) << "\n"
      << "workers = " << experiment.workers << "\n"
      << "parallel_partitions = " << bool_text(experiment.parallel_partitions)
      << "\n"
      << "\n[augment]\n"
      << "enabled = " << bool_text(augment.enabled) << "\n"
      << "per_unseen = " << augment.per_unseen << "\n"
      << "top_k = " << augment.top_k << "\n"
      << "epsilon = " << fmt::format("{}", augment.analogy.epsilon) << "\n"
      << "shift_cosines = " << bool_text(augment.analogy.shift_cosines) << "\n"
      << "\n[features]\n"
      << "k = " << features.k << "\n"
      << "relations = " << join(features.relations) << "\n"
      << "\n[phase1]\n";
  write_network(out, phase1.network);
  out << "negative_ratio = " << fmt::format("{}", phase1.negative_ratio) << "\n"
      << "alpha = " << fmt::format("{}", phase1.alpha) << "\n"
      << "\n[phase2]\n";
  write_network(out, phase2.network);
  out << "negative_ratio = " << phase2.negative_ratio << "\n"
      << "input = " << alias(phase2.input) << "\n"
      << "\n[ablation]\n"
      << "augmentation = " << bool_text(ablation.augmentation) << "\n"
      << "inputs = " << join(ablation.inputs) << "\n"
      << "negative_ratios = " << join(ablation.negative_ratios) << "\n"
      << "\n[baselines]\n"
      << "enabled = " << bool_text(baselines.enabled) << "\n"
      << "aggregation = " << to_string(baselines.aggregation) << "\n"
      << "restrict_unseen = " << bool_text(baselines.restrict_unseen) << "\n";
  return out.str();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(to_ini()); }

neural::TextCnnConfig ExperimentConfig::phase1_cnn(std::size_t input_dim) const {
  auto c = network_config(phase1.network, input_dim);
  c.head = neural::Head::kSigmoid;
  c.output_classes = 1;
  return c;
}

neural::TextCnnConfig ExperimentConfig::traditional_cnn(
    std::size_t input_dim, std::size_t classes) const {
  auto c = network_config(phase2.network, input_dim);
  c.head = neural::Head::kSoftmax;
  c.output_classes = classes;
  return c;
}

neural::TextCnnConfig ExperimentConfig::zeroshot_cnn(std::size_t input_dim) const {
  auto c = network_config(phase2.network, input_dim);
  c.head = neural::Head::kSigmoid;
  c.output_classes = 1;
  return c;
}

}  // namespace zsl
