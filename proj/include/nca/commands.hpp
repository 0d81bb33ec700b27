// Copyright 2026 The nca authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nca/io.hpp"

namespace nca {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_pos, tol_rank, tol_eq;
  std::vector<double> times;
  std::vector<std::pair<int, int>> pairs;
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  Tolerances tol;
  std::vector<Check> entries;
  Json data = Json::object();
  std::vector<std::string> warnings;

  bool passed() const;
  std::size_t failures() const;
  Json to_json() const;
  std::string to_human() const;
};

const std::vector<std::string>& command_names();

// Throws InputError (exit class 2) for unusable specs or missing fields.
Report run_command(const std::string& command, const ProblemSpec& spec,
                   const RunOptions& options = {});

// 0 when every entry passed, 1 otherwise.
int exit_code(const Report& report);

// "0-1,2-3" -> {(0,1), (2,3)}
std::vector<std::pair<int, int>> parse_pairs(const std::string& text);
// "0,0.1,1" -> {0, 0.1, 1}
std::vector<double> parse_times(const std::string& text);

}  // namespace nca
