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
#include <vector>

#include <json.hpp>

#include "nca/cdc.hpp"
#include "nca/network.hpp"

namespace nca {

using Json = nlohmann::ordered_json;

// Every problem found while reading a spec, each prefixed by its JSON path.
class SpecError : public InputError {
 public:
  explicit SpecError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

struct GeneratorSpec {
  std::string kind;  // lindblad | matrix | network | group | spectral_triple
  std::vector<Element> vs;                // lindblad
  std::optional<SuperOperator> superop;   // matrix
  double scale = 1.0;                     // matrix
  RealMatrix c;                           // network
  bool allow_negative = false;            // network
  SymmetryPolicy symmetry = SymmetryPolicy::symmetrize;
  std::vector<SuperOperator> autos;       // group
  std::vector<double> weights;            // group
  Matrix dirac;                           // spectral_triple
};

struct ProblemSpec {
  AlgebraPtr algebra;
  std::optional<GeneratorSpec> generator;
  std::vector<Element> states;  // densities
  std::optional<Element> projection;
  std::optional<Element> weight_element;
  std::vector<double> times;
  std::optional<Tolerances> tolerances;
  std::optional<std::uint64_t> seed;
};

ProblemSpec parse_spec(const Json& doc);
ProblemSpec parse_spec_text(const std::string& text);
ProblemSpec parse_spec_file(const std::string& path);

// Per-block 2-D arrays of [re, im] pairs (bare numbers read as real).
Json encode_element(const Element& a);
Element decode_element(const Json& j, const AlgebraPtr& algebra);
Json encode_matrix(const Matrix& m);
Json encode_real_matrix(const RealMatrix& m);
Json encode_algebra(const Algebra& a);

// Deterministic text: keys in insertion order, numbers printed with %.17g.
std::string emit_json(const Json& j);

}  // namespace nca
