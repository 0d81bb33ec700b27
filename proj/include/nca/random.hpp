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

#include <cstdint>
#include <random>

#include "nca/algebra.hpp"

namespace nca {

// All randomized witnesses draw from this generator so a single seed
// reproduces every report.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int integer(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  cplx complex_normal() { return {normal(), normal()}; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

Element random_element(const AlgebraPtr& algebra, Rng& rng);
Element random_self_adjoint(const AlgebraPtr& algebra, Rng& rng);
// b* b for random b.
Element random_positive(const AlgebraPtr& algebra, Rng& rng);
Matrix random_matrix(int rows, int cols, Rng& rng);
// Symmetric, zero diagonal, weights in [0.1, 2); each edge kept with the given
// probability. Not necessarily connected.
RealMatrix random_conductances(int n, double edge_probability, Rng& rng);

}  // namespace nca
