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

#ifndef ZSL_CSV_HPP_
#define ZSL_CSV_HPP_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace zsl {

// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
// line breaks.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::filesystem::path source = {});

  // Reads the next record into `fields`; false at end of input.
  bool next(std::vector<std::string>& fields);

  // Line on which the most recently returned record started (1-based).
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::filesystem::path source_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace zsl

#endif  // ZSL_CSV_HPP_
