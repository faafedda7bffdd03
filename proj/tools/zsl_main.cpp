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

// Command-line front end: per-module utilities plus the experiment stages.

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "zsl/augment.hpp"
#include "zsl/config.hpp"
#include "zsl/corpus.hpp"
#include "zsl/embed.hpp"
#include "zsl/experiment.hpp"
#include "zsl/neural.hpp"
#include "zsl/semgraph.hpp"

namespace fs = std::filesystem;

namespace {

using namespace zsl;

struct StageOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> partitions;
  std::optional<double> unseen_rate;
  std::optional<std::string> workdir;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> partition;
};

void add_stage_options(CLI::App* app, StageOptions& o, bool per_partition) {
  app->add_option("--config", o.config, "experiment INI file")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--partitions", o.partitions, "number of class partitions");
  app->add_option("--unseen-rate", o.unseen_rate, "fraction of unseen classes");
  app->add_option("--workdir", o.workdir, "output directory");
  app->add_option("--workers", o.workers, "worker threads");
  if (per_partition) {
    app->add_option("--partition", o.partition,
                    "partition index (default: all)");
  }
}

ExperimentConfig load_config(const StageOptions& o) {
  auto c = ExperimentConfig::load(o.config);
  if (o.seed) c.experiment.seed = *o.seed;
  if (o.partitions) c.experiment.partitions = *o.partitions;
  if (o.unseen_rate) c.experiment.unseen_rate = *o.unseen_rate;
  if (o.workdir) c.experiment.workdir = *o.workdir;
  if (o.workers) c.experiment.workers = *o.workers;
  return c;
}

std::vector<std::size_t> selected_partitions(const StageOptions& o,
                                             const ExperimentConfig& c) {
  if (o.partition) return {*o.partition};
  std::vector<std::size_t> all(c.experiment.partitions);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

LabeledCorpus load_corpus(const std::string& format, const fs::path& path,
                          const fs::path& classes_path) {
  auto classes = load_class_metadata(classes_path);
  if (format == "newsgroups") return load_newsgroups(path, classes);
  if (format == "dbpedia") {
    const std::vector<fs::path> files{path};
    return load_dbpedia_csv(files, classes);
  }
  if (format == "tsv") return load_labeled_tsv(path, classes);
  if (format == "tokenized") return load_tokenized(path, classes);
  throw Error("unknown corpus format '" + format + "'");
}

int print_report(const MetricsReport& report) {
  std::cout << report.to_text();
  return report.failures().empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot text classification toolkit"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  // corpus stats
  auto* corpus_cmd = app.add_subcommand("corpus", "corpus utilities");
  corpus_cmd->require_subcommand(1);
  auto* stats_cmd = corpus_cmd->add_subcommand("stats", "corpus statistics");
  std::string corpus_path, corpus_format = "tsv", corpus_classes;
  std::size_t corpus_vocab = Vocabulary::kDefaultMaxSize;
  stats_cmd->add_option("path", corpus_path, "corpus file or directory")
      ->required()
      ->check(CLI::ExistingPath);
  stats_cmd->add_option("--format", corpus_format)
      ->check(CLI::IsMember({"newsgroups", "dbpedia", "tsv", "tokenized"}));
  stats_cmd->add_option("--classes", corpus_classes)
      ->required()
      ->check(CLI::ExistingFile);
  stats_cmd->add_option("--vocabulary-size", corpus_vocab);

  // embed analogy
  auto* embed_cmd = app.add_subcommand("embed", "embedding utilities");
  embed_cmd->require_subcommand(1);
  auto* analogy_cmd = embed_cmd->add_subcommand(
      "analogy", "solve c : w :: c' : ? with 3CosMul");
  std::string an_w, an_c, an_cp, an_embeddings;
  std::size_t an_top_k = 10;
  AnalogyOptions an_options;
  bool an_raw = false;
  analogy_cmd->add_option("w", an_w)->required();
  analogy_cmd->add_option("c", an_c)->required();
  analogy_cmd->add_option("c_prime", an_cp)->required();
  analogy_cmd->add_option("--embeddings", an_embeddings)
      ->required()
      ->check(CLI::ExistingFile);
  analogy_cmd->add_option("--top-k", an_top_k);
  analogy_cmd->add_option("--epsilon", an_options.epsilon);
  analogy_cmd->add_flag("--raw-cosines", an_raw, "do not shift cosines");

  // augment
  auto* augment_cmd = app.add_subcommand(
      "augment", "topic translation (standalone, or a stage with --config)");
  StageOptions augment_stage;
  std::string au_from, au_to, au_in, au_out, au_embeddings, au_lexicon,
      au_classes;
  std::size_t au_top_k = TopicTranslator::kDefaultTopK;
  augment_cmd->add_option("--config", augment_stage.config)
      ->check(CLI::ExistingFile);
  augment_cmd->add_option("--seed", augment_stage.seed);
  augment_cmd->add_option("--partitions", augment_stage.partitions);
  augment_cmd->add_option("--unseen-rate", augment_stage.unseen_rate);
  augment_cmd->add_option("--workdir", augment_stage.workdir);
  augment_cmd->add_option("--workers", augment_stage.workers);
  augment_cmd->add_option("--partition", augment_stage.partition);
  augment_cmd->add_option("--from-class", au_from, "source class id or label");
  augment_cmd->add_option("--to-class", au_to, "target class id or label");
  augment_cmd->add_option("--in", au_in, "one document per line")
      ->check(CLI::ExistingFile);
  augment_cmd->add_option("--out", au_out);
  augment_cmd->add_option("--top-k", au_top_k);
  augment_cmd->add_option("--embeddings", au_embeddings)
      ->check(CLI::ExistingFile);
  augment_cmd->add_option("--lexicon", au_lexicon)->check(CLI::ExistingFile);
  augment_cmd->add_option("--classes", au_classes)->check(CLI::ExistingFile);

  // semgraph build-features
  auto* semgraph_cmd = app.add_subcommand("semgraph", "knowledge graph features");
  semgraph_cmd->require_subcommand(1);
  auto* build_cmd = semgraph_cmd->add_subcommand(
      "build-features", "relationship vectors for vocabulary x classes");
  std::string sg_graph, sg_classes, sg_vocab, sg_lexicon, sg_out;
  int sg_k = 3;
  std::size_t sg_workers = 1;
  std::vector<std::string> sg_relations(default_relations().begin(),
                                        default_relations().end());
  build_cmd->add_option("--graph", sg_graph)->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--classes", sg_classes)
      ->required()
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--vocab", sg_vocab)->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--lexicon", sg_lexicon)
      ->required()
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--k", sg_k)->check(CLI::Range(1, 16));
  build_cmd->add_option("--relations", sg_relations)->delimiter(',');
  build_cmd->add_option("--workers", sg_workers);
  build_cmd->add_option("--out", sg_out)->required();

  // neural gradcheck
  auto* neural_cmd = app.add_subcommand("neural", "network utilities");
  neural_cmd->require_subcommand(1);
  auto* gradcheck_cmd = neural_cmd->add_subcommand(
      "gradcheck", "finite-difference check of the text CNN gradients");
  std::string gc_config;
  std::uint64_t gc_seed = 1;
  double gc_tolerance = 1e-5;
  gradcheck_cmd->add_option("--config", gc_config,
                            "JSON network config (default: small sigmoid net)")
      ->check(CLI::ExistingFile);
  gradcheck_cmd->add_option("--seed", gc_seed);
  gradcheck_cmd->add_option("--tolerance", gc_tolerance);

  // experiment stages
  StageOptions stage;
  auto* prepare_cmd = app.add_subcommand("prepare", "load, split, partition");
  add_stage_options(prepare_cmd, stage, false);
  auto* features_cmd = app.add_subcommand("features", "build v_wc feature cache");
  add_stage_options(features_cmd, stage, false);
  auto* train_cmd = app.add_subcommand("train", "train both phases");
  add_stage_options(train_cmd, stage, true);
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score test documents");
  add_stage_options(evaluate_cmd, stage, true);
  auto* ablate_cmd = app.add_subcommand("ablate", "ablation experiments");
  add_stage_options(ablate_cmd, stage, true);
  auto* report_cmd = app.add_subcommand("report", "aggregate partition results");
  add_stage_options(report_cmd, stage, false);
  auto* run_cmd = app.add_subcommand("run", "every stage, every partition");
  add_stage_options(run_cmd, stage, false);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");

  try {
    if (stats_cmd->parsed()) {
      auto corpus = load_corpus(corpus_format, corpus_path, corpus_classes);
      const auto vocabulary = build_vocabulary(corpus, corpus_vocab);
      const auto s = corpus_stats(corpus, vocabulary);
      fmt::print("documents\t{}\ntokens\t{}\ndistinct_words\t{}\n", s.documents,
                 s.tokens, s.distinct_words);
      fmt::print("vocabulary\t{}\ntoken_coverage\t{:.4f}\n", s.vocabulary_size,
                 s.token_coverage);
      for (const auto& [id, n] : s.documents_per_class) {
        fmt::print("class {}\t{}\n", id, n);
      }
      return 0;
    }

    if (analogy_cmd->parsed()) {
      const auto store = EmbeddingStore::load(an_embeddings);
      an_options.shift_cosines = !an_raw;
      for (const auto& cand :
           solve_analogy(store, an_w, an_c, an_cp, an_top_k, an_options)) {
        fmt::print("{}\t{:.6f}\n", cand.word, cand.score);
      }
      return 0;
    }

    if (augment_cmd->parsed()) {
      if (!augment_stage.config.empty()) {
        Experiment experiment(load_config(augment_stage));
        for (std::size_t p : selected_partitions(augment_stage, experiment.config())) {
          experiment.augment(p);
        }
        return 0;
      }
      if (au_from.empty() || au_to.empty() || au_in.empty() || au_out.empty() ||
          au_embeddings.empty() || au_lexicon.empty() || au_classes.empty()) {
        throw Error(
            "augment: without --config, --from-class --to-class --in --out "
            "--embeddings --lexicon and --classes are required");
      }
      const ClassHierarchy hierarchy(load_class_metadata(au_classes));
      auto find_class = [&](const std::string& key) -> const ClassMeta& {
        for (const auto& c : hierarchy.all()) {
          if (c.label == key || c.one_word_label == key ||
              std::to_string(c.class_id) == key) {
            return c;
          }
        }
        throw Error("augment: unknown class '" + key + "'");
      };
      const ClassMeta& from = find_class(au_from);
      const ClassMeta& to = find_class(au_to);
      const auto store = EmbeddingStore::load(au_embeddings);
      const auto lexicon = PosLexicon::load(au_lexicon);
      const TopicTranslator translator(store, lexicon, from.one_word_label,
                                       to.one_word_label, au_top_k);
      std::ifstream in(au_in);
      std::string out, line;
      std::size_t n = 0;
      while (std::getline(in, line)) {
        Document doc{fmt::format("line-{}", ++n), tokenize(line), from.class_id};
        const auto t = translator.translate(doc);
        out += fmt::format("{}", fmt::join(t.document.tokens, " "));
        out += '\n';
      }
      write_file(au_out, out);
      spdlog::info("translated {} documents from '{}' to '{}'", n, from.label,
                   to.label);
      return 0;
    }

    if (build_cmd->parsed()) {
      const std::set<std::string> relations(sg_relations.begin(),
                                            sg_relations.end());
      KnowledgeGraph::LoadStats ls;
      const auto graph = KnowledgeGraph::load(sg_graph, relations, &ls);
      const ClassHierarchy hierarchy(load_class_metadata(sg_classes));
      const auto vocabulary = Vocabulary::load(sg_vocab);
      const auto lexicon = PosLexicon::load(sg_lexicon);
      std::vector<ClassId> classes;
      std::vector<ClassNodeSets> sets;
      for (const auto& c : hierarchy.all()) {
        classes.push_back(c.class_id);
        sets.push_back(class_node_sets(c, hierarchy, lexicon, graph));
      }
      const auto table =
          FeatureTable::build(vocabulary, classes, sets, sg_k, graph, sg_workers);
      table.save(sg_out);
      spdlog::info("{} words x {} classes x {} features ({} of {} edges kept)",
                   vocabulary.size(), classes.size(), table.dimension(), ls.kept,
                   ls.lines);
      return 0;
    }

    if (gradcheck_cmd->parsed()) {
      neural::TextCnnConfig config{8, {2, 3}, 4, {5}, neural::Head::kSigmoid, 1,
                                   0.0};
      if (!gc_config.empty()) {
        config = nlohmann::json::parse(read_file(gc_config))
                     .get<neural::TextCnnConfig>();
      }
      const neural::TextCnn<double> model(config, gc_seed);
      Rng rng(derive_seed(gc_seed, {1}));
      neural::Matrix<double> input;
      input.assign(config.max_filter_size() + 3, config.input_dim);
      for (std::size_t r = 0; r < input.rows(); ++r) {
        for (auto& x : input.row(r)) x = 2.0 * uniform_unit(rng) - 1.0;
      }
      const std::size_t target =
          config.head == neural::Head::kSigmoid ? 1 : config.output_classes - 1;
      const auto report = neural::gradient_check(model, input, target, gc_tolerance);
      fmt::print(
          "max_relative_error\t{:.3e}\nworst\t{}[{}]\nchecked\t{}\n"
          "skipped_kinks\t{}\ntolerance\t{:.1e}\nresult\t{}\n",
          report.max_relative_error, report.worst_tensor, report.worst_index,
          report.checked, report.skipped_kinks, report.tolerance,
          report.passed ? "PASS" : "FAIL");
      return report.passed ? 0 : 1;
    }

    const auto config = [&] { return load_config(stage); };
    if (prepare_cmd->parsed()) {
      Experiment(config()).prepare();
      return 0;
    }
    if (features_cmd->parsed()) {
      Experiment(config()).features();
      return 0;
    }
    if (train_cmd->parsed()) {
      Experiment e(config());
      for (std::size_t p : selected_partitions(stage, e.config())) e.train(p);
      return 0;
    }
    if (evaluate_cmd->parsed() || ablate_cmd->parsed()) {
      Experiment e(config());
      for (std::size_t p : selected_partitions(stage, e.config())) {
        const auto r = evaluate_cmd->parsed() ? e.evaluate(p) : e.ablate(p);
        std::cout << r.to_text();
      }
      return 0;
    }
    if (report_cmd->parsed()) return print_report(Experiment(config()).report());
    if (run_cmd->parsed()) return print_report(Experiment(config()).run());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
