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

// Serial reference vs OpenMP kernels on the assemblies that dominate the
// check commands: the pair table of a carré du champ, the bimodule Gram
// matrix and a triple scan.
#include <benchmark/benchmark.h>

#include <cmath>

#include "nca/cdc.hpp"
#include "nca/kernels.hpp"
#include "nca/random.hpp"

namespace {

using nca::kernels::Exec;

nca::AlgebraPtr algebra_for(int n) { return nca::build_algebra({n, 1}, {1.0, 2.0}); }

Exec exec_of(const benchmark::State& state) {
  return state.range(1) ? Exec::parallel : Exec::serial;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) ? "openmp x" + std::to_string(nca::kernels::max_threads())
                                : "serial");
}

// Gamma(e_i, e_j) for an inner derivation, d^2 products of d x d blocks.
void BM_PairTable(benchmark::State& state) {
  auto alg = algebra_for(static_cast<int>(state.range(0)));
  nca::Rng rng(1);
  nca::Element v = nca::random_element(alg, rng);
  const int d = alg->dim();
  for (auto _ : state) {
    auto table = nca::kernels::pair_table(
        d,
        [&](int i, int j) {
          nca::Element a = nca::Element::basis(alg, i), b = nca::Element::basis(alg, j);
          nca::Element da = v * a - a * v, db = v * b - b * v;
          return nca::Element(da.adjoint() * db);
        },
        exec_of(state));
    benchmark::DoNotOptimize(table.data());
  }
  label(state);
}

// Dense fill with a cheap entry, the shape of the d^2 x d^2 Gram assembly.
void BM_FillMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int dd = n * n * n * n;
  for (auto _ : state) {
    nca::Matrix m = nca::kernels::fill_matrix(
        dd, dd,
        [&](int r, int c) {
          return nca::cplx(std::cos(0.001 * r * c), std::sin(0.002 * (r - c)));
        },
        exec_of(state));
    benchmark::DoNotOptimize(m.data());
  }
  label(state);
}

// Triple scan over basis indices, the shape of the Leibniz and chain rule probes.
void BM_TripleMax(benchmark::State& state) {
  auto alg = algebra_for(static_cast<int>(state.range(0)));
  const int d = alg->dim();
  std::vector<nca::Element> basis;
  for (int k = 0; k < d; ++k) basis.push_back(nca::Element::basis(alg, k));
  for (auto _ : state) {
    auto best = nca::kernels::triple_max(
        d,
        [&](int i, int j, int k) {
          return (basis[i] * basis[j] * basis[k] - basis[k] * basis[j] * basis[i]).norm();
        },
        exec_of(state));
    benchmark::DoNotOptimize(best.value);
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_PairTable)->ArgsProduct({{3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FillMatrix)->ArgsProduct({{3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TripleMax)->ArgsProduct({{3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
