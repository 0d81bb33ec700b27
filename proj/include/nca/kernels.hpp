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

#include <functional>
#include <vector>

#include "nca/algebra.hpp"

// Data-parallel loops behind the d^2 / d^3 / d^4 assemblies. Each kernel has
// an OpenMP version and a serial reference; the two must agree exactly.
namespace nca::kernels {

enum class Exec { serial, parallel };

// out[i * d + j] = f(i, j)
std::vector<Element> pair_table(int d, const std::function<Element(int, int)>& f,
                                Exec exec = Exec::parallel);

// Dense matrix with out(i, j) = f(i, j).
Matrix fill_matrix(int rows, int cols, const std::function<cplx(int, int)>& f,
                   Exec exec = Exec::parallel);

struct TripleMax {
  double value = 0.0;
  int i = -1, j = -1, k = -1;
};

// Maximum of f over all triples in [0, d)^3. Ties resolve to the
// lexicographically first triple, independent of thread count.
TripleMax triple_max(int d, const std::function<double(int, int, int)>& f,
                     Exec exec = Exec::parallel);

int max_threads();

}  // namespace nca::kernels
