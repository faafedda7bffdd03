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

// Accuracy bookkeeping and per-partition metric tables.

#ifndef ZSL_REPORT_HPP_
#define ZSL_REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zsl/corpus.hpp"

namespace zsl {

struct Accuracy {
  std::size_t correct = 0;
  std::size_t total = 0;

  void add(bool hit) {
    correct += hit;
    ++total;
  }
  // Absent for an empty subset.
  std::optional<double> value() const;
};

struct SubsetAccuracy {
  Accuracy seen;    // gold class in C_S
  Accuracy unseen;  // gold class in C_U

  Accuracy overall() const {
    return {seen.correct + unseen.correct, seen.total + unseen.total};
  }
};

// Multi-class accuracy split by the gold class's side of the partition.
SubsetAccuracy accuracy(std::span<const ClassId> predicted,
                        std::span<const ClassId> gold,
                        const ClassPartition& partition);

struct MetricRow {
  std::string table;
  std::string system;
  std::string subset;  // seen | unseen | overall | ...
  std::vector<std::optional<double>> per_partition;

  // Over the partitions where the value is present.
  std::optional<double> mean() const;
  // Unbiased sample variance; absent with fewer than two values.
  std::optional<double> variance() const;
};

class MetricsReport {
 public:
  explicit MetricsReport(std::size_t partitions = 0) : partitions_(partitions) {}

  std::size_t partitions() const { return partitions_; }
  const std::vector<MetricRow>& rows() const { return rows_; }
  const MetricRow* find(const std::string& table, const std::string& system,
                        const std::string& subset) const;

  void set(const std::string& table, const std::string& system,
           const std::string& subset, std::size_t partition,
           std::optional<double> value);
  void set(const std::string& table, const std::string& system,
           std::size_t partition, const SubsetAccuracy& accuracy);

  // Partition-level failures ("partition 2: <cause>").
  void add_failure(std::string message) { failures_.push_back(std::move(message)); }
  const std::vector<std::string>& failures() const { return failures_; }

  void set_config_echo(std::string text) { config_echo_ = std::move(text); }
  const std::string& config_echo() const { return config_echo_; }

  // Folds another report's rows for one partition into this one.
  void merge_partition(const MetricsReport& single, std::size_t partition);

  std::string to_text() const;
  std::string to_csv() const;
  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);

 private:
  MetricRow& row(const std::string& table, const std::string& system,
                 const std::string& subset);

  std::size_t partitions_;
  std::vector<MetricRow> rows_;
  std::vector<std::string> failures_;
  std::string config_echo_;
};

enum class ReportFormat { kText, kCsv };

// Writes the report; throws if the path is not writable.
void emit_report(const MetricsReport& report, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace zsl

#endif  // ZSL_REPORT_HPP_
