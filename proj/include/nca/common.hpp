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

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nca {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Malformed input: bad shapes, mismatched algebras, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Distance between states that no finite-energy function separates.
class DisconnectedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double pos = 1e-9;    // positivity, relative to 1 + norm
  double rank = 1e-10;  // eigenvalues below rank * lambda_max are zero
  double eq = 1e-9;     // identities between computed quantities
};

// Numerical data explaining a failed (or informative) check.
struct Witness {
  std::string what;
  std::vector<double> values;
  std::vector<int> indices;
};

// One verified property. residual is the largest violation magnitude seen
// (or the largest discrepancy for identities).
struct Check {
  Check() = default;
  explicit Check(std::string n) : name(std::move(n)) {}

  std::string name;
  bool passed = true;
  double residual = 0.0;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  std::optional<Witness> witness;
  std::optional<bool> value;  // set for checks that report a property rather than assert one
};

// Folds part into total: counts add, the worst residual and its witness win.
inline void merge_check(Check& total, const Check& part) {
  total.evaluated += part.evaluated;
  total.violations += part.violations;
  total.passed = total.passed && part.passed;
  if (part.residual > total.residual || (!part.passed && !total.witness)) {
    total.residual = std::max(total.residual, part.residual);
    if (part.witness) total.witness = part.witness;
  }
}

}  // namespace nca
