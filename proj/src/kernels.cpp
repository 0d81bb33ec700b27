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

#include "nca/kernels.hpp"

#ifdef NCA_HAVE_OPENMP
#include <omp.h>
#endif

namespace nca::kernels {

int max_threads() {
#ifdef NCA_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

static void pair_table_serial(int d, const std::function<Element(int, int)>& f,
                              std::vector<Element>& out) {
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[i * d + j] = f(i, j);
}

static void pair_table_omp(int d, const std::function<Element(int, int)>& f,
                           std::vector<Element>& out) {
  const int total = d * d;
#pragma omp parallel for schedule(dynamic, 4)
  for (int p = 0; p < total; ++p) out[p] = f(p / d, p % d);
}

std::vector<Element> pair_table(int d, const std::function<Element(int, int)>& f,
                                Exec exec) {
  std::vector<Element> out(static_cast<std::size_t>(d) * d);
  if (exec == Exec::serial)
    pair_table_serial(d, f, out);
  else
    pair_table_omp(d, f, out);
  return out;
}

Matrix fill_matrix(int rows, int cols, const std::function<cplx(int, int)>& f,
                   Exec exec) {
  Matrix out(rows, cols);
  if (exec == Exec::serial) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) out(i, j) = f(i, j);
    return out;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = f(i, j);
  return out;
}

static void take(TripleMax& best, double v, int i, int j, int k) {
  if (best.i < 0 || v > best.value) best = {v, i, j, k};
}

TripleMax triple_max(int d, const std::function<double(int, int, int)>& f,
                     Exec exec) {
  if (exec == Exec::serial) {
    TripleMax best;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) take(best, f(i, j, k), i, j, k);
    return best;
  }
  // One slot per leading index, reduced in order afterwards.
  std::vector<TripleMax> slots(d);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < d; ++i) {
    TripleMax local;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) take(local, f(i, j, k), i, j, k);
    slots[i] = local;
  }
  TripleMax best;
  for (const auto& s : slots)
    if (s.i >= 0) take(best, s.value, s.i, s.j, s.k);
  return best;
}

}  // namespace nca::kernels
