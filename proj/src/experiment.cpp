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

#include "zsl/experiment.hpp"

#include <set>
#include <unordered_set>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

namespace zsl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSplitTag = 0x73706c6974;  // "split"
constexpr std::uint64_t kAugmentTag = 1;
constexpr std::uint64_t kPhase1Tag = 2;
constexpr std::uint64_t kTraditionalTag = 3;
constexpr std::uint64_t kZeroShotTag = 4;

constexpr const char* kEndToEnd = "end-to-end accuracy";
constexpr const char* kPhase1 = "phase 1 seen/unseen accuracy";
constexpr const char* kPhase2 = "phase 2 accuracy";
constexpr const char* kInputs = "zero-shot input ablation";
constexpr const char* kNegatives = "zero-shot negative sampling";

std::string phase1_system(bool augmented) {
  return augmented ? "with augmentation" : "without augmentation";
}

// Fraction of documents whose seen/unseen side is recognized.
SubsetAccuracy binary_accuracy(std::span<const EncodedDocument> documents,
                               const std::vector<bool>& accepted,
                               const ClassPartition& partition) {
  SubsetAccuracy out;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    const ClassId gold = *documents[i].gold_class;
    if (partition.is_seen(gold)) {
      out.seen.add(accepted[i]);
    } else {
      out.unseen.add(!accepted[i]);
    }
  }
  return out;
}

std::vector<bool> bank_accepts(const Phase1Bank& bank,
                               std::span<const EncodedDocument> documents,
                               const DocumentEncoder& encoder,
                               std::size_t workers) {
  std::vector<char> accepted(documents.size(), 0);
  parallel_for(documents.size(), workers, [&](std::size_t i) {
    accepted[i] = phase1_predict(bank, documents[i], encoder).seen;
  });
  return {accepted.begin(), accepted.end()};
}

Accuracy zeroshot_accuracy(const ZeroShotModel& model,
                           std::span<const EncodedDocument> documents,
                           const ClassPartition& partition,
                           const ZeroShotEncoder& encoder, std::size_t workers) {
  std::vector<char> hits(documents.size(), 0);
  std::vector<char> counted(documents.size(), 0);
  parallel_for(documents.size(), workers, [&](std::size_t i) {
    const ClassId gold = *documents[i].gold_class;
    if (!partition.is_unseen(gold)) return;
    counted[i] = 1;
    hits[i] = zeroshot_predict(model, documents[i], partition.unseen, encoder)
                  .class_id == gold;
  });
  Accuracy acc;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (counted[i]) acc.add(hits[i]);
  }
  return acc;
}

json partition_json(const ClassPartition& p, std::size_t index) {
  return {{"index", index}, {"seed", p.seed}, {"seen", p.seen},
          {"unseen", p.unseen}};
}

void write_json(const fs::path& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

}  // namespace

struct Experiment::Resources {
  std::vector<ClassMeta> classes;
  std::optional<ClassHierarchy> hierarchy;
  std::optional<LabeledCorpus> corpus;
  std::optional<Vocabulary> vocabulary;
  std::vector<ClassPartition> partitions;
  std::unique_ptr<EmbeddingStore> store;
  std::unique_ptr<EmbeddingStore> analogy;
  std::unique_ptr<PosLexicon> lexicon;
  std::unique_ptr<FeatureTable> features;
  std::unique_ptr<DocumentEncoder> encoder;
};

Experiment::Experiment(ExperimentConfig config)
    : config_(std::move(config)), r_(std::make_unique<Resources>()) {
  config_.validate();
}

Experiment::~Experiment() = default;

fs::path Experiment::partition_dir(std::size_t partition) const {
  return workdir() / ("partition-" + std::to_string(partition));
}

std::uint64_t Experiment::partition_seed(std::size_t partition) const {
  return derive_seed(config_.experiment.seed, {partition});
}

// --- Prepared data ------------------------------------------------------------------

namespace {

// Digest of every setting that shapes the prepared directory.
std::string prepare_stamp(const ExperimentConfig& c) {
  const std::string ini = c.to_ini();
  const auto start = ini.find("[data]");
  const auto end = ini.find("[augment]");
  return fmt::format("{:016x}", fnv1a(ini.substr(start, end - start)));
}

}  // namespace

bool Experiment::prepared() const {
  const fs::path dir = workdir() / "prepared";
  for (const char* name :
       {"corpus.tsv", "vocab.txt", "partitions.json", "stamp"}) {
    if (!fs::exists(dir / name)) return false;
  }
  return std::string(trim(read_file(dir / "stamp"))) == prepare_stamp(config_);
}

void Experiment::prepare() {
  std::lock_guard lock(mutex_);
  const DataConfig& d = config_.data;
  auto classes = load_class_metadata(d.classes);
  LabeledCorpus corpus;
  if (d.format == "newsgroups") {
    corpus = load_newsgroups(d.corpus.front(), classes,
                             {d.strip_headers, d.max_per_class});
  } else if (d.format == "dbpedia") {
    corpus = load_dbpedia_csv(d.corpus, classes,
                              {d.include_title, d.max_per_class});
  } else if (d.format == "tsv") {
    corpus = load_labeled_tsv(d.corpus.front(), classes);
  } else {
    corpus = load_tokenized(d.corpus.front(), classes);
  }
  if (corpus.split.empty() || d.format != "tokenized") {
    corpus = split_train_test(corpus, d.train_fraction,
                              derive_seed(config_.experiment.seed, {kSplitTag}));
  }
  Vocabulary vocabulary = build_vocabulary(corpus, d.vocabulary_size);

  const auto dataset_classes = corpus.dataset_classes();
  std::vector<ClassPartition> partitions;
  json pj = json::array();
  for (std::size_t p = 0; p < config_.experiment.partitions; ++p) {
    partitions.push_back(partition_classes(
        std::span<const ClassId>(dataset_classes),
        config_.experiment.unseen_rate, partition_seed(p)));
    pj.push_back(partition_json(partitions.back(), p));
  }

  const fs::path dir = workdir() / "prepared";
  fs::create_directories(dir);
  save_tokenized(corpus, dir / "corpus.tsv");
  vocabulary.save(dir / "vocab.txt");
  write_json(dir / "partitions.json", pj);
  write_file(dir / "stamp", prepare_stamp(config_) + "\n");

  const auto stats = corpus_stats(corpus, vocabulary);
  spdlog::info(
      "prepared {} documents over {} classes; vocabulary {} words covering "
      "{:.1f}% of tokens",
      stats.documents, dataset_classes.size(), vocabulary.size(),
      100.0 * stats.token_coverage);

  r_->classes = classes;
  r_->hierarchy.emplace(std::move(classes));
  r_->corpus = std::move(corpus);
  r_->vocabulary = std::move(vocabulary);
  r_->partitions = std::move(partitions);
  r_->encoder.reset();
  r_->features.reset();
  r_->analogy.reset();
}

void Experiment::load_prepared() {
  std::lock_guard lock(mutex_);
  if (r_->corpus) return;
  if (!prepared()) {
    prepare();
    return;
  }
  const fs::path dir = workdir() / "prepared";
  r_->classes = load_class_metadata(config_.data.classes);
  r_->hierarchy.emplace(r_->classes);
  r_->corpus = load_tokenized(dir / "corpus.tsv", r_->classes);
  r_->vocabulary = Vocabulary::load(dir / "vocab.txt");
  r_->partitions.clear();
  for (const auto& pj : json::parse(read_file(dir / "partitions.json"))) {
    ClassPartition p;
    p.seen = pj.at("seen").get<std::vector<ClassId>>();
    p.unseen = pj.at("unseen").get<std::vector<ClassId>>();
    p.seed = pj.at("seed").get<std::uint64_t>();
    r_->partitions.push_back(std::move(p));
  }
}

const std::vector<ClassPartition>& Experiment::partitions() {
  load_prepared();
  return r_->partitions;
}

const LabeledCorpus& Experiment::corpus() {
  load_prepared();
  return *r_->corpus;
}

const Vocabulary& Experiment::vocabulary() {
  load_prepared();
  return *r_->vocabulary;
}

const ClassHierarchy& Experiment::hierarchy() {
  load_prepared();
  return *r_->hierarchy;
}

void Experiment::check_partition(std::size_t partition) {
  if (partition >= partitions().size()) {
    throw Error(fmt::format("partition {} out of range (have {})", partition,
                            partitions().size()));
  }
}

// --- Shared resources -----------------------------------------------------------------

const EmbeddingStore& Experiment::embeddings() {
  std::lock_guard lock(mutex_);
  if (!r_->store) {
    std::unordered_set<std::string> keep(vocabulary().words().begin(),
                                         vocabulary().words().end());
    for (const auto& meta : r_->classes) keep.insert(meta.one_word_label);
    EmbeddingStore::LoadOptions options;
    options.max_words = config_.data.embedding_max_words;
    options.always_keep = &keep;
    r_->store = std::make_unique<EmbeddingStore>(
        EmbeddingStore::load(config_.data.embeddings, options));
    spdlog::info("loaded {} vectors of dimension {}", r_->store->size(),
                 r_->store->dimension());
    for (const auto& meta : r_->classes) {
      if (!r_->store->contains(meta.one_word_label)) {
        throw Error("class " + std::to_string(meta.class_id) +
                    ": one-word label '" + meta.one_word_label +
                    "' has no embedding");
      }
    }
  }
  return *r_->store;
}

// Analogy candidates are restricted to words the classifiers can read: the
// vocabulary plus the class labels.
const EmbeddingStore& Experiment::analogy_store() {
  std::lock_guard lock(mutex_);
  if (!r_->analogy) {
    const EmbeddingStore& full = embeddings();
    std::unordered_set<std::string> labels;
    for (const auto& meta : r_->classes) labels.insert(meta.one_word_label);
    auto store = std::make_unique<EmbeddingStore>(full.dimension());
    for (std::size_t i = 0; i < full.size(); ++i) {
      const auto& w = full.word(i);
      if (vocabulary().contains(w) || labels.count(w)) {
        store->add(w, full.vector(i));
      }
    }
    r_->analogy = std::move(store);
  }
  return *r_->analogy;
}

const PosLexicon& Experiment::lexicon() {
  std::lock_guard lock(mutex_);
  if (!r_->lexicon) {
    r_->lexicon =
        std::make_unique<PosLexicon>(PosLexicon::load(config_.data.lexicon));
  }
  return *r_->lexicon;
}

const DocumentEncoder& Experiment::encoder() {
  std::lock_guard lock(mutex_);
  if (!r_->encoder) {
    r_->encoder = std::make_unique<DocumentEncoder>(
        embeddings(), vocabulary(), config_.data.max_length);
  }
  return *r_->encoder;
}

void Experiment::features() {
  std::lock_guard lock(mutex_);
  std::set<std::string> relations(config_.features.relations.begin(),
                                  config_.features.relations.end());
  KnowledgeGraph::LoadStats stats;
  const auto graph = KnowledgeGraph::load(config_.data.graph, relations, &stats);
  spdlog::info("graph: {} nodes, {} edges ({} of {} lines kept)",
               graph.node_count(), graph.edge_count(), stats.kept, stats.lines);
  const auto classes = corpus().dataset_classes();
  std::vector<ClassNodeSets> sets;
  for (ClassId c : classes) {
    sets.push_back(
        class_node_sets(hierarchy().at(c), hierarchy(), lexicon(), graph));
  }
  auto table = FeatureTable::build(vocabulary(), classes, sets,
                                   config_.features.k, graph,
                                   config_.experiment.workers);
  table.save(workdir() / "prepared" / "features.bin");
  r_->features = std::make_unique<FeatureTable>(std::move(table));
}

const FeatureTable& Experiment::feature_table() {
  std::lock_guard lock(mutex_);
  if (!r_->features) {
    const fs::path path = workdir() / "prepared" / "features.bin";
    const auto classes = corpus().dataset_classes();
    if (fs::exists(path)) {
      auto table = FeatureTable::load(path);
      if (table.matches(vocabulary(), classes, config_.features.k)) {
        r_->features = std::make_unique<FeatureTable>(std::move(table));
      } else {
        spdlog::info("feature cache is stale; rebuilding");
      }
    }
    if (!r_->features) features();
  }
  return *r_->features;
}

std::vector<EncodedDocument> Experiment::encoded(Split split) {
  const auto& c = corpus();
  const auto& enc = encoder();
  std::vector<EncodedDocument> out;
  for (std::size_t i : c.indices(split)) out.push_back(enc.encode(c.documents[i]));
  return out;
}

// --- Partition stages ---------------------------------------------------------------------

void Experiment::augment(std::size_t partition) {
  check_partition(partition);
  const ClassPartition& part = partitions()[partition];
  const LabeledCorpus filtered = remove_unseen_training(corpus(), part);
  check_no_leakage(filtered, part);
  AugmentOptions options;
  options.per_unseen = config_.augment.per_unseen;
  options.top_k = config_.augment.top_k;
  options.workers = config_.experiment.workers;
  options.analogy = config_.augment.analogy;
  const auto docs = generate_augmented_corpus(
      filtered, part, analogy_store(), lexicon(), options,
      derive_seed(partition_seed(partition), {kAugmentTag}));
  fs::create_directories(partition_dir(partition));
  save_augmented(docs, partition_dir(partition) / "augmented.tsv");
}

void Experiment::train(std::size_t partition) {
  check_partition(partition);
  const ClassPartition& part = partitions()[partition];
  const std::uint64_t seed = partition_seed(partition);
  const std::size_t workers = config_.experiment.workers;
  const DocumentEncoder& enc = encoder();
  const std::size_t dim = enc.store().dimension();

  std::vector<EncodedDocument> train_docs;
  for (auto& d : encoded(Split::kTrain)) {
    if (part.is_seen(*d.gold_class)) train_docs.push_back(std::move(d));
  }
  std::vector<EncodedDocument> augmented;
  if (config_.augment.enabled) {
    const fs::path path = partition_dir(partition) / "augmented.tsv";
    if (!fs::exists(path)) augment(partition);
    for (const auto& a : load_augmented(path)) {
      augmented.push_back(enc.encode(a.document));
    }
  }

  TwoPhaseModels models;
  Phase1Options p1;
  p1.cnn = config_.phase1_cnn(dim);
  p1.train = config_.phase1.network.train;
  p1.negative_ratio = config_.phase1.negative_ratio;
  p1.use_augmented = config_.augment.enabled;
  p1.alpha = config_.phase1.alpha;
  p1.workers = workers;
  spdlog::info("partition {}: training phase 1 ({} classes)", partition,
               part.seen.size());
  models.bank = train_phase1(train_docs, part, augmented, enc, p1,
                             derive_seed(seed, {kPhase1Tag}));
  fit_thresholds(models.bank, train_docs, enc, p1.alpha, workers);

  spdlog::info("partition {}: training traditional classifier", partition);
  TraditionalOptions trad;
  trad.cnn = config_.traditional_cnn(dim, part.seen.size());
  trad.train = config_.phase2.network.train;
  models.traditional = train_traditional(train_docs, part, enc, trad,
                                         derive_seed(seed, {kTraditionalTag}));

  spdlog::info("partition {}: training zero-shot classifier", partition);
  const ZeroShotInput input = config_.phase2.input;
  const ZeroShotEncoder zenc(enc, hierarchy(),
                             uses_relation(input) ? &feature_table() : nullptr,
                             input);
  ZeroShotOptions zs;
  zs.cnn = config_.zeroshot_cnn(zenc.dimension());
  zs.train = config_.phase2.network.train;
  zs.negative_ratio = config_.phase2.negative_ratio;
  models.zeroshot = train_zeroshot(train_docs, part, zenc, zs,
                                   derive_seed(seed, {kZeroShotTag}));

  json manifest = {{"partition", partition_json(part, partition)},
                   {"seed", seed},
                   {"config_hash", fmt::format("{:016x}", config_.hash())},
                   {"augmented_documents", augmented.size()}};
  save_checkpoint(partition_dir(partition) / "checkpoint", models, manifest);
}

MetricsReport Experiment::evaluate(std::size_t partition) {
  check_partition(partition);
  const ClassPartition& part = partitions()[partition];
  const std::size_t workers = config_.experiment.workers;
  const fs::path checkpoint = partition_dir(partition) / "checkpoint";
  if (!fs::exists(checkpoint / "manifest.json")) train(partition);
  const TwoPhaseModels models = load_checkpoint(checkpoint);
  const DocumentEncoder& enc = encoder();
  const ZeroShotEncoder zenc(
      enc, hierarchy(),
      uses_relation(models.zeroshot.input) ? &feature_table() : nullptr,
      models.zeroshot.input);

  const auto test = encoded(Split::kTest);
  std::vector<ClassId> gold;
  for (const auto& d : test) gold.push_back(*d.gold_class);

  MetricsReport out(1);
  const auto predictions =
      two_phase_classify(models, part, test, enc, zenc, workers);
  std::vector<ClassId> predicted;
  std::vector<bool> accepted;
  for (const auto& p : predictions) {
    predicted.push_back(p.predicted);
    accepted.push_back(p.coarse_seen);
  }
  out.set(kEndToEnd, "two-phase", 0, accuracy(predicted, gold, part));

  if (config_.baselines.enabled) {
    std::vector<ClassMeta> all;
    std::vector<ClassMeta> unseen;
    for (ClassId c : corpus().dataset_classes()) {
      all.push_back(hierarchy().at(c));
      if (part.is_unseen(c)) unseen.push_back(hierarchy().at(c));
    }
    const LabelSimilarityBaseline similarity_all(embeddings(), all,
                                                 config_.baselines.aggregation);
    const LabelSimilarityBaseline similarity_unseen(
        embeddings(), unseen, config_.baselines.aggregation);
    const auto& c = corpus();
    const auto test_indices = c.indices(Split::kTest);
    std::vector<ClassId> count_pred(test_indices.size());
    std::vector<ClassId> sim_pred(test_indices.size());
    parallel_for(test_indices.size(), workers, [&](std::size_t i) {
      const Document& doc = c.documents[test_indices[i]];
      const bool restrict =
          config_.baselines.restrict_unseen && part.is_unseen(*doc.gold_class);
      count_pred[i] = baseline_count(doc, restrict ? unseen : all);
      sim_pred[i] = (restrict ? similarity_unseen : similarity_all).predict(doc);
    });
    std::vector<ClassId> raw_gold;
    for (std::size_t i : test_indices) raw_gold.push_back(*c.documents[i].gold_class);
    out.set(kEndToEnd, "count-based baseline", 0,
            accuracy(count_pred, raw_gold, part));
    out.set(kEndToEnd, "label-similarity baseline", 0,
            accuracy(sim_pred, raw_gold, part));
  }

  out.set(kPhase1, phase1_system(config_.augment.enabled), 0,
          binary_accuracy(test, accepted, part));

  Accuracy traditional;
  for (const auto& d : test) {
    if (!part.is_seen(*d.gold_class)) continue;
    traditional.add(traditional_predict(models.traditional, d, enc).class_id ==
                    *d.gold_class);
  }
  out.set(kPhase2, "traditional", "seen", 0, traditional.value());
  out.set(kPhase2, "zero-shot", "unseen", 0,
          zeroshot_accuracy(models.zeroshot, test, part, zenc, workers).value());

  write_json(partition_dir(partition) / "metrics.json", out.to_json());
  return out;
}

MetricsReport Experiment::ablate(std::size_t partition) {
  check_partition(partition);
  const ClassPartition& part = partitions()[partition];
  const std::uint64_t seed = partition_seed(partition);
  const std::size_t workers = config_.experiment.workers;
  const DocumentEncoder& enc = encoder();
  const std::size_t dim = enc.store().dimension();

  std::vector<EncodedDocument> train_docs;
  for (auto& d : encoded(Split::kTrain)) {
    if (part.is_seen(*d.gold_class)) train_docs.push_back(std::move(d));
  }
  const auto test = encoded(Split::kTest);
  MetricsReport out(1);

  if (config_.ablation.augmentation && config_.augment.enabled) {
    spdlog::info("partition {}: phase 1 without augmentation", partition);
    Phase1Options p1;
    p1.cnn = config_.phase1_cnn(dim);
    p1.train = config_.phase1.network.train;
    p1.negative_ratio = config_.phase1.negative_ratio;
    p1.use_augmented = false;
    p1.alpha = config_.phase1.alpha;
    p1.workers = workers;
    auto bank =
        train_phase1(train_docs, part, {}, enc, p1, derive_seed(seed, {kPhase1Tag}));
    fit_thresholds(bank, train_docs, enc, p1.alpha, workers);
    const auto accepted = bank_accepts(bank, test, enc, workers);
    out.set(kPhase1, phase1_system(false), 0,
            binary_accuracy(test, accepted, part));
  }

  const fs::path checkpoint = partition_dir(partition) / "checkpoint";
  std::optional<TwoPhaseModels> trained;
  if (fs::exists(checkpoint / "manifest.json")) trained = load_checkpoint(checkpoint);

  auto zeroshot_run = [&](ZeroShotInput input, std::size_t ratio) {
    const ZeroShotEncoder zenc(
        enc, hierarchy(), uses_relation(input) ? &feature_table() : nullptr,
        input);
    if (trained && trained->zeroshot.input == input &&
        ratio == config_.phase2.negative_ratio) {
      return zeroshot_accuracy(trained->zeroshot, test, part, zenc, workers);
    }
    ZeroShotOptions zs;
    zs.cnn = config_.zeroshot_cnn(zenc.dimension());
    zs.train = config_.phase2.network.train;
    zs.negative_ratio = ratio;
    spdlog::info("partition {}: zero-shot ablation {} (negatives {})",
                 partition, to_string(input), ratio);
    const auto model =
        train_zeroshot(train_docs, part, zenc, zs, derive_seed(seed, {kZeroShotTag}));
    return zeroshot_accuracy(model, test, part, zenc, workers);
  };

  for (ZeroShotInput input : config_.ablation.inputs) {
    out.set(kInputs, to_string(input), "unseen", 0,
            zeroshot_run(input, config_.phase2.negative_ratio).value());
  }
  if (!config_.ablation.inputs.empty()) {
    out.set(kInputs, "random guess", "unseen", 0,
            1.0 / static_cast<double>(part.unseen.size()));
  }
  if (!config_.ablation.negative_ratios.empty()) {
    std::set<std::size_t> ratios(config_.ablation.negative_ratios.begin(),
                                 config_.ablation.negative_ratios.end());
    ratios.insert(config_.phase2.negative_ratio);
    for (std::size_t r : ratios) {
      out.set(kNegatives, fmt::format("negatives per positive = {}", r),
              "unseen", 0, zeroshot_run(config_.phase2.input, r).value());
    }
  }
  write_json(partition_dir(partition) / "ablation.json", out.to_json());
  return out;
}

MetricsReport Experiment::report() {
  const std::size_t n = config_.experiment.partitions;
  MetricsReport total(n);
  for (std::size_t p = 0; p < n; ++p) {
    const fs::path dir = partition_dir(p);
    for (const char* name : {"metrics.json", "ablation.json"}) {
      if (fs::exists(dir / name)) {
        total.merge_partition(
            MetricsReport::from_json(json::parse(read_file(dir / name))), p);
      }
    }
    if (fs::exists(dir / "failure.txt")) {
      total.add_failure(fmt::format("partition {}: {}", p,
                                    trim(read_file(dir / "failure.txt"))));
    }
  }
  total.set_config_echo(config_.to_ini());
  fs::create_directories(workdir());
  emit_report(total, ReportFormat::kText, workdir() / "report.txt");
  emit_report(total, ReportFormat::kCsv, workdir() / "report.csv");
  write_json(workdir() / "report.json", total.to_json());
  return total;
}

MetricsReport Experiment::run() {
  prepare();
  const bool needs_features =
      uses_relation(config_.phase2.input) ||
      std::any_of(config_.ablation.inputs.begin(), config_.ablation.inputs.end(),
                  [](ZeroShotInput i) { return uses_relation(i); });
  if (needs_features) features();
  // Load shared state up front so partitions only read it.
  encoder();
  if (config_.augment.enabled) {
    analogy_store();
    lexicon();
  }

  auto run_partition = [&](std::size_t p) {
    const fs::path dir = partition_dir(p);
    fs::create_directories(dir);
    fs::remove(dir / "failure.txt");
    fs::remove(dir / "metrics.json");
    fs::remove(dir / "ablation.json");
    fs::remove_all(dir / "checkpoint");
    try {
      if (config_.augment.enabled) augment(p);
      train(p);
      evaluate(p);
      ablate(p);
    } catch (const std::exception& e) {
      spdlog::error("partition {} failed: {}", p, e.what());
      write_file(dir / "failure.txt", std::string(e.what()) + "\n");
    }
  };
  const std::size_t n = config_.experiment.partitions;
  if (config_.experiment.parallel_partitions) {
    parallel_for(n, config_.experiment.workers, run_partition);
  } else {
    for (std::size_t p = 0; p < n; ++p) run_partition(p);
  }
  return report();
}

MetricsReport run_experiment(const ExperimentConfig& config) {
  return Experiment(config).run();
}

}  // namespace zsl
