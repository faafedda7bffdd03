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

#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "zsl/framework.hpp"

namespace zsl {

namespace fs = std::filesystem;

void save_thresholds(const fs::path& path, const Phase1Bank& bank) {
  std::string out;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    out += fmt::format("{}\t{:.17g}\n", bank.classes[i], bank.thresholds[i]);
  }
  write_file(path, out);
}

std::vector<std::pair<ClassId, double>> load_thresholds(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::pair<ClassId, double>> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw ParseError(path, line_number, "expected class_id<TAB>threshold");
    }
    ClassId id = 0;
    double tau = 0.0;
    const auto r1 = std::from_chars(fields[0].data(),
                                    fields[0].data() + fields[0].size(), id);
    const auto r2 = std::from_chars(fields[1].data(),
                                    fields[1].data() + fields[1].size(), tau);
    if (r1.ec != std::errc() || r2.ec != std::errc()) {
      throw ParseError(path, line_number, "malformed threshold record");
    }
    out.emplace_back(id, tau);
  }
  return out;
}

void save_checkpoint(const fs::path& dir, const TwoPhaseModels& models,
                     const nlohmann::json& manifest) {
  fs::create_directories(dir / "phase1");
  fs::create_directories(dir / "phase2");
  for (std::size_t i = 0; i < models.bank.size(); ++i) {
    models.bank.models[i].save(dir / "phase1" /
                               (std::to_string(models.bank.classes[i]) + ".model"));
  }
  save_thresholds(dir / "phase1" / "thresholds", models.bank);
  models.traditional.model.save(dir / "phase2" / "traditional.model");
  models.zeroshot.model.save(dir / "phase2" / "zeroshot.model");

  nlohmann::json full = manifest;
  full["traditional_classes"] = models.traditional.classes;
  full["zeroshot_input"] = to_string(models.zeroshot.input);
  write_file(dir / "manifest.json", full.dump(2) + "\n");
}

TwoPhaseModels load_checkpoint(const fs::path& dir, nlohmann::json* manifest) {
  const auto meta = nlohmann::json::parse(read_file(dir / "manifest.json"));
  TwoPhaseModels models;
  for (const auto& [id, tau] : load_thresholds(dir / "phase1" / "thresholds")) {
    models.bank.classes.push_back(id);
    models.bank.thresholds.push_back(tau);
    models.bank.models.push_back(
        Model::load(dir / "phase1" / (std::to_string(id) + ".model")));
  }
  models.traditional.classes =
      meta.at("traditional_classes").get<std::vector<ClassId>>();
  models.traditional.model = Model::load(dir / "phase2" / "traditional.model");
  models.zeroshot.input =
      parse_zeroshot_input(meta.at("zeroshot_input").get<std::string>());
  models.zeroshot.model = Model::load(dir / "phase2" / "zeroshot.model");
  if (manifest) *manifest = meta;
  return models;
}

}  // namespace zsl
