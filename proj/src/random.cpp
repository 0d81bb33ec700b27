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

#include "nca/random.hpp"

namespace nca {

Matrix random_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

Element random_element(const AlgebraPtr& algebra, Rng& rng) {
  Element e(algebra);
  for (int i = 0; i < algebra->num_blocks(); ++i) {
    int n = algebra->block_size(i);
    e.block(i) = random_matrix(n, n, rng);
  }
  return e;
}

Element random_self_adjoint(const AlgebraPtr& algebra, Rng& rng) {
  Element e = random_element(algebra, rng);
  return 0.5 * (e + e.adjoint());
}

Element random_positive(const AlgebraPtr& algebra, Rng& rng) {
  Element e = random_element(algebra, rng);
  return e.adjoint() * e;
}

RealMatrix random_conductances(int n, double edge_probability, Rng& rng) {
  RealMatrix c = RealMatrix::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (rng.uniform(0.0, 1.0) < edge_probability) {
        double w = rng.uniform(0.1, 2.0);
        c(x, y) = c(y, x) = w;
      }
  return c;
}

}  // namespace nca
