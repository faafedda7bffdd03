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
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>

#include <gtest/gtest.h>

#include "synthetic_world.hpp"
#include "zsl/experiment.hpp"

namespace zsl {
namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int status = -1;
  std::string output;
};

CommandResult run(const std::string& command) {
  CommandResult r;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen((command + " 2>&1").c_str(), "r"),
                                              pclose);
  if (!pipe) return r;
  char buffer[4096];
  while (std::size_t n = fread(buffer, 1, sizeof buffer, pipe.get())) {
    r.output.append(buffer, n);
  }
  const int raw = pclose(pipe.release());
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path fresh_world(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  testing::make_synthetic_world({}).write(dir);
  return dir;
}

const char* kTables[] = {"end-to-end accuracy", "phase 1 seen/unseen accuracy",
                         "phase 2 accuracy", "zero-shot input ablation",
                         "zero-shot negative sampling"};

TEST(Pipeline, EndToEndOnSyntheticWorld) {
  const auto dir = fresh_world("zsl_pipeline_e2e");
  const auto config = ExperimentConfig::load(dir / "config.ini");
  Experiment experiment(config);
  const auto report = experiment.run();
  EXPECT_TRUE(report.failures().empty())
      << (report.failures().empty() ? "" : report.failures().front());
  const std::string text = report.to_text();
  for (const char* table : kTables) {
    EXPECT_NE(text.find(table), std::string::npos) << table;
  }
  const auto* two_phase = report.find("end-to-end accuracy", "two-phase", "overall");
  ASSERT_NE(two_phase, nullptr);
  ASSERT_TRUE(two_phase->mean().has_value());
  EXPECT_GT(*two_phase->mean(), 0.5);
  const auto* seen = report.find("phase 2 accuracy", "traditional", "seen");
  ASSERT_NE(seen, nullptr);
  EXPECT_GT(seen->mean().value_or(0), 0.8);
  for (const char* file : {"report.txt", "report.csv", "report.json"}) {
    EXPECT_TRUE(fs::exists(experiment.workdir() / file)) << file;
  }
  EXPECT_TRUE(fs::exists(experiment.partition_dir(0) / "checkpoint"));

  // Rerunning from a fresh object reproduces the report bit for bit.
  Experiment again(config);
  EXPECT_EQ(again.run().to_csv(), report.to_csv());

  // Report alone reassembles the persisted per-partition results.
  Experiment reader(config);
  EXPECT_EQ(reader.report().to_csv(), report.to_csv());
}

TEST(Pipeline, PartitionsAreDisjointAndCoverClasses) {
  const auto dir = fresh_world("zsl_pipeline_parts");
  write_file(dir / "config.ini", testing::synthetic_config(3, 0.34));
  Experiment experiment(ExperimentConfig::load(dir / "config.ini"));
  experiment.prepare();
  const auto& parts = experiment.partitions();
  ASSERT_EQ(parts.size(), 3u);
  for (const auto& p : parts) {
    EXPECT_EQ(p.seen.size() + p.unseen.size(), 6u);
    EXPECT_EQ(p.unseen.size(), 2u);
    for (ClassId c : p.unseen) EXPECT_FALSE(p.is_seen(c));
  }
  EXPECT_NE(experiment.partition_seed(0), experiment.partition_seed(1));
}

TEST(ShippedMetadata, NewsgroupsClassesFormAHierarchy) {
  const auto classes =
      load_class_metadata(fs::path(ZSL_SOURCE_DIR) / "data/classes/20news.csv");
  const ClassHierarchy hierarchy(classes);
  std::size_t keyed = 0;
  for (const auto& meta : classes) {
    if (meta.dataset_key.empty()) continue;
    ++keyed;
    EXPECT_FALSE(meta.one_word_label.empty());
    EXPECT_EQ(meta.one_word_label.find(' '), std::string::npos);
    ASSERT_TRUE(meta.parent.has_value()) << meta.label;
    EXPECT_FALSE(hierarchy.ancestors(meta.class_id).empty());
  }
  EXPECT_EQ(keyed, 20u);
}

TEST(Acceptance, OfflineCriteriaReportOneLineEach) {
  const auto r = run(std::string(ZSL_ACCEPTANCE) + " --skip-dataset");
  EXPECT_EQ(r.status, 1) << r.output;
  std::size_t lines = 0;
  std::size_t from = 0;
  while ((from = r.output.find("criterion ", from)) != std::string::npos) {
    ++lines;
    ++from;
  }
  EXPECT_EQ(lines, 9u) << r.output;
  for (const char* pass : {"criterion 1: PASS", "criterion 3: PASS", "criterion 8: PASS"}) {
    EXPECT_NE(r.output.find(pass), std::string::npos) << r.output;
  }
  EXPECT_NE(r.output.find("criterion 4: FAIL"), std::string::npos) << r.output;
}

class Cli : public ::testing::Test {
 protected:
  static std::string cli() { return ZSL_CLI; }
  static std::string data(const std::string& name) {
    return std::string(ZSL_TEST_DATA) + "/" + name;
  }
};

TEST_F(Cli, HelpAndUnknownCommand) {
  const auto help = run(cli() + " --help");
  EXPECT_EQ(help.status, 0);
  EXPECT_NE(help.output.find("corpus"), std::string::npos);
  EXPECT_NE(run(cli() + " frobnicate").status, 0);
}

TEST_F(Cli, EmbedAnalogyMatchesOracle) {
  const auto r = run(cli() + " embed analogy king man woman --embeddings " +
                     data("cosmul5.txt") + " --top-k 2");
  ASSERT_EQ(r.status, 0) << r.output;
  const auto girl = r.output.find("girl");
  const auto queen = r.output.find("queen");
  ASSERT_NE(girl, std::string::npos) << r.output;
  ASSERT_NE(queen, std::string::npos) << r.output;
  EXPECT_LT(girl, queen);
  EXPECT_NE(r.output.find("1.5558"), std::string::npos) << r.output;
  EXPECT_NE(run(cli() + " embed analogy king nobody woman --embeddings " +
                data("cosmul5.txt")).status, 0);
}

TEST_F(Cli, NeuralGradcheckPasses) {
  const auto r = run(cli() + " neural gradcheck --seed 3");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("PASS"), std::string::npos) << r.output;
}

TEST_F(Cli, CorpusStatsAndRunStages) {
  const auto dir = fresh_world("zsl_pipeline_cli");
  const auto stats = run(cli() + " corpus stats " + (dir / "corpus.tsv").string() +
                         " --format tsv --classes " + (dir / "classes.csv").string());
  ASSERT_EQ(stats.status, 0) << stats.output;
  EXPECT_NE(stats.output.find("360"), std::string::npos) << stats.output;

  const std::string config = " --config " + (dir / "config.ini").string();
  for (const char* stage : {"prepare", "features"}) {
    const auto r = run(cli() + " " + stage + config);
    ASSERT_EQ(r.status, 0) << stage << ": " << r.output;
  }
  const auto r = run(cli() + " run" + config);
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("end-to-end accuracy"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "work" / "report.csv"));

  const auto missing = run(cli() + " run --config " + (dir / "nope.ini").string());
  EXPECT_NE(missing.status, 0);
}

}  // namespace
}  // namespace zsl
