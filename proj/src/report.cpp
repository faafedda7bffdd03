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

#include "zsl/report.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "zsl/csv.hpp"

namespace zsl {

namespace {

constexpr const char* kAbsent = "—";

std::string format_value(const std::optional<double>& v) {
  return v ? fmt::format("{:.4f}", *v) : std::string(kAbsent);
}

std::string csv_value(const std::optional<double>& v) {
  return v ? fmt::format("{:.17g}", *v) : std::string();
}

// Display width of UTF-8 text.
std::size_t width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
  return n;
}

std::string pad(const std::string& s, std::size_t w) {
  return s + std::string(w > width(s) ? w - width(s) : 0, ' ');
}

}  // namespace

std::optional<double> Accuracy::value() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

SubsetAccuracy accuracy(std::span<const ClassId> predicted,
                        std::span<const ClassId> gold,
                        const ClassPartition& partition) {
  if (predicted.size() != gold.size()) {
    throw Error("accuracy: prediction and gold counts differ");
  }
  SubsetAccuracy out;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool hit = predicted[i] == gold[i];
    if (partition.is_seen(gold[i])) {
      out.seen.add(hit);
    } else if (partition.is_unseen(gold[i])) {
      out.unseen.add(hit);
    } else {
      throw Error("accuracy: gold class " + std::to_string(gold[i]) +
                  " is outside the partition");
    }
  }
  return out;
}

std::optional<double> MetricRow::mean() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : per_partition) {
    if (!v) continue;
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> MetricRow::variance() const {
  const auto m = mean();
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : per_partition) {
    if (!v) continue;
    sum += (*v - *m) * (*v - *m);
    ++n;
  }
  if (n < 2) return std::nullopt;
  return sum / static_cast<double>(n - 1);
}

const MetricRow* MetricsReport::find(const std::string& table,
                                     const std::string& system,
                                     const std::string& subset) const {
  for (const auto& r : rows_) {
    if (r.table == table && r.system == system && r.subset == subset) return &r;
  }
  return nullptr;
}

MetricRow& MetricsReport::row(const std::string& table,
                              const std::string& system,
                              const std::string& subset) {
  for (auto& r : rows_) {
    if (r.table == table && r.system == system && r.subset == subset) return r;
  }
  rows_.push_back({table, system, subset, {}});
  rows_.back().per_partition.resize(partitions_);
  return rows_.back();
}

void MetricsReport::set(const std::string& table, const std::string& system,
                        const std::string& subset, std::size_t partition,
                        std::optional<double> value) {
  if (partition >= partitions_) {
    throw Error("report: partition index out of range");
  }
  row(table, system, subset).per_partition[partition] = value;
}

void MetricsReport::set(const std::string& table, const std::string& system,
                        std::size_t partition, const SubsetAccuracy& accuracy) {
  set(table, system, "seen", partition, accuracy.seen.value());
  set(table, system, "unseen", partition, accuracy.unseen.value());
  set(table, system, "overall", partition, accuracy.overall().value());
}

void MetricsReport::merge_partition(const MetricsReport& single,
                                    std::size_t partition) {
  for (const auto& r : single.rows()) {
    std::optional<double> v;
    for (const auto& x : r.per_partition) {
      if (x) v = x;
    }
    set(r.table, r.system, r.subset, partition, v);
  }
  for (const auto& f : single.failures()) add_failure(f);
}

std::string MetricsReport::to_text() const {
  std::vector<std::string> tables;
  for (const auto& r : rows_) {
    if (std::find(tables.begin(), tables.end(), r.table) == tables.end()) {
      tables.push_back(r.table);
    }
  }
  std::string out;
  for (const auto& table : tables) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header = {"system", "subset", "mean", "variance"};
    for (std::size_t p = 0; p < partitions_; ++p) {
      header.push_back("p" + std::to_string(p));
    }
    cells.push_back(header);
    for (const auto& r : rows_) {
      if (r.table != table) continue;
      std::vector<std::string> line = {r.system, r.subset, format_value(r.mean()),
                                       r.variance() ? fmt::format("{:.6f}", *r.variance())
                                                    : std::string(kAbsent)};
      for (const auto& v : r.per_partition) line.push_back(format_value(v));
      cells.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& line : cells) {
      for (std::size_t c = 0; c < line.size(); ++c) {
        widths[c] = std::max(widths[c], width(line[c]));
      }
    }
    out += "== " + table + " ==\n";
    for (const auto& line : cells) {
      std::string text;
      for (std::size_t c = 0; c < line.size(); ++c) {
        text += pad(line[c], widths[c] + 2);
      }
      while (!text.empty() && text.back() == ' ') text.pop_back();
      out += text + "\n";
    }
    out += "\n";
  }
  if (!failures_.empty()) {
    out += "== failures ==\n";
    for (const auto& f : failures_) out += f + "\n";
    out += "\n";
  }
  if (!config_echo_.empty()) {
    out += "== effective configuration ==\n" + config_echo_;
  }
  return out;
}

std::string MetricsReport::to_csv() const {
  std::vector<std::string> header = {"table", "system", "subset", "mean",
                                     "variance"};
  for (std::size_t p = 0; p < partitions_; ++p) {
    header.push_back("p" + std::to_string(p));
  }
  std::string out = csv_join(header) + "\n";
  for (const auto& r : rows_) {
    std::vector<std::string> line = {r.table, r.system, r.subset,
                                     csv_value(r.mean()), csv_value(r.variance())};
    for (const auto& v : r.per_partition) line.push_back(csv_value(v));
    out += csv_join(line) + "\n";
  }
  return out;
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json j;
  j["partitions"] = partitions_;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows_) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : r.per_partition) {
      values.push_back(v ? nlohmann::json(*v) : nlohmann::json());
    }
    j["rows"].push_back({{"table", r.table},
                         {"system", r.system},
                         {"subset", r.subset},
                         {"values", values}});
  }
  j["failures"] = failures_;
  j["config"] = config_echo_;
  return j;
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j) {
  MetricsReport report(j.at("partitions").get<std::size_t>());
  for (const auto& r : j.at("rows")) {
    const auto& values = r.at("values");
    for (std::size_t p = 0; p < values.size(); ++p) {
      report.set(r.at("table").get<std::string>(),
                 r.at("system").get<std::string>(),
                 r.at("subset").get<std::string>(), p,
                 values[p].is_null() ? std::nullopt
                                     : std::optional<double>(values[p].get<double>()));
    }
  }
  report.failures_ = j.value("failures", std::vector<std::string>{});
  report.config_echo_ = j.value("config", std::string());
  return report;
}

void emit_report(const MetricsReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  const std::string text =
      format == ReportFormat::kText ? report.to_text() : report.to_csv();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report to " + path.string());
  out << text;
  if (!out) throw Error("cannot write report to " + path.string());
}

}  // namespace zsl
