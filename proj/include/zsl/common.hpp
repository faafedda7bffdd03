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

#ifndef ZSL_COMMON_HPP_
#define ZSL_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zsl {

using ClassId = int;

// Base class for every error the library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; the message carries path and 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::filesystem::path& path, std::size_t line,
             const std::string& what);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t epoch, const std::string& what);

  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t value);

// Deterministic child seed for (master, tag...) so that every stage of an
// experiment draws from its own stream regardless of execution order.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> tags);

// Uniform integer in [0, n). Unlike std::uniform_int_distribution the result
// sequence is identical across standard library implementations.
std::size_t uniform_index(Rng& rng, std::size_t n);

// Uniform double in [0, 1).
double uniform_unit(Rng& rng);

template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[uniform_index(rng, i)]);
  }
}

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data,
                    std::uint64_t basis = 0xcbf29ce484222325ULL);

// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions thrown by
// fn are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

std::vector<std::string> split(std::string_view text, char delimiter);
std::string_view trim(std::string_view text);

}  // namespace zsl

#endif  // ZSL_COMMON_HPP_
