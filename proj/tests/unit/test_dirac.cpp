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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "nca/dirac.hpp"
#include "nca/energy.hpp"
#include "oracles.hpp"

using namespace nca;
using Catch::Matchers::WithinAbs;

namespace {

Element unit(const AlgebraPtr& alg, int block, int row, int col) {
  return Element::basis(alg, alg->basis_position(block, row, col));
}

RealMatrix k3() {
  RealMatrix c = RealMatrix::Ones(3, 3);
  c.diagonal().setZero();
  return c;
}

RealMatrix edge(double c) {
  RealMatrix m(2, 2);
  m << 0, c, c, 0;
  return m;
}

RealMatrix star(int leaves) {
  RealMatrix c = RealMatrix::Zero(leaves + 1, leaves + 1);
  for (int i = 1; i <= leaves; ++i) c(0, i) = c(i, 0) = 1;
  return c;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("build_bimodule", "[dirac]") {
  auto m2 = build_algebra({2}, {1});
  BimoduleSpace zero = build_bimodule(commutator_cdc({Element::identity(m2)}));
  CHECK(zero.rank == 0);
  CHECK(zero.ambient_dim == 12);

  BimoduleSpace two = build_bimodule(network_cdc(edge(1.0), 0.5));
  CHECK(two.rank == 2);

  CdCForm pair = commutator_cdc({unit(m2, 0, 0, 1), unit(m2, 0, 1, 0)});
  BimoduleSpace bs = build_bimodule(pair);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx inner = bs.differential(Element::basis(m2, i))
                       .dot(bs.differential(Element::basis(m2, j)));
      worst = std::max(worst, std::abs(inner - pair.gram(i, j).tau()));
    }
  CHECK(worst < 1e-10);
  CHECK(bs.gram_min_eigenvalue >= -1e-9);
  CHECK(bs.null_invariance_residual < 1e-9);
  CHECK(bs.star_residual < 1e-9);

  RealMatrix neg = k3();
  neg(0, 1) = neg(1, 0) = -0.1;
  CHECK_THROWS_AS(build_bimodule(network_cdc(neg, 0.5, true)), InputError);
}

TEST_CASE("left action is a *-representation", "[dirac][property]") {
  auto alg = build_algebra({2, 1}, {1.0, 2.0});
  Rng rng(3);
  CdCForm g = spectral_triple_cdc([&] {
    Matrix x = random_matrix(3, 3, rng);
    return Matrix(x + x.adjoint());
  }(), alg);
  BimoduleSpace bs = build_bimodule(g);
  for (int trial = 0; trial < 5; ++trial) {
    Element a = random_element(alg, rng);
    Element b = random_element(alg, rng);
    CHECK(max_abs(bs.left(a).adjoint() - bs.left(a.adjoint())) < 1e-9);
    CHECK(max_abs(bs.left(a * b) - bs.left(a) * bs.left(b)) < 1e-9);
    CHECK(max_abs(bs.right(a * b) - bs.right(b) * bs.right(a)) < 1e-9);
    CHECK(max_abs(bs.left(a) * bs.right(b) - bs.right(b) * bs.left(a)) < 1e-9);
  }
}

TEST_CASE("dirac operator", "[dirac]") {
  auto m2 = build_algebra({2}, {1});
  DiracOperator dz = dirac(build_bimodule(commutator_cdc({Element::identity(m2)})));
  CHECK(max_abs(dz.matrix) == 0.0);

  auto net_form = network_cdc(k3(), 0.5);
  DiracOperator d = dirac(build_bimodule(net_form));
  CHECK((d.matrix - d.matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  Matrix d2 = d.matrix * d.matrix;
  Matrix top = d2.topLeftCorner(d.base_dim, d.base_dim);
  Laplacian lap = laplacian(energy_form(net_form));
  Eigen::SelfAdjointEigenSolver<Matrix> a(top), b(lap.matrix());
  CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-9);
  // D anticommutes with the grading.
  Matrix g = d.grading();
  CHECK(max_abs(g * d.matrix + d.matrix * g) == 0.0);
}

TEST_CASE("dirac_seminorm examples", "[dirac]") {
  auto m2 = build_algebra({2}, {1});
  Element v = unit(m2, 0, 0, 1);
  CdCForm gv = commutator_cdc({v});
  DiracOperator d = dirac(build_bimodule(gv));
  CHECK_THAT(dirac_seminorm(d, Element::identity(m2)), WithinAbs(0.0, 1e-12));
  // Gamma(v, v) = 0 but Gamma(v*, v*) = [v, v*]*[v, v*] = 1
  CHECK(gv(v, v).norm() < 1e-14);
  CHECK(gv(v.adjoint(), v.adjoint()).distance(Element::identity(m2)) < 1e-14);
  CHECK_THAT(dirac_seminorm(d, v), WithinAbs(1.0, 1e-9));
  CHECK_THAT(gamma_norm_formula(gv, v), WithinAbs(1.0, 1e-12));

  auto x2 = counting_algebra(2);
  DiracOperator d2 = dirac(build_bimodule(network_cdc(x2, edge(1.0), 1.0)));
  CHECK_THAT(dirac_seminorm(d2, Element::real_function(x2, {1, 0})), WithinAbs(1.0, 1e-12));
}

TEST_CASE("dirac seminorm matches the network sup formula", "[dirac]") {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    RealMatrix c = random_conductances(5, 0.7, rng);
    auto x5 = counting_algebra(5);
    DiracOperator d = dirac(build_bimodule(network_cdc(x5, c, 1.0)));
    std::vector<cplx> f(5);
    for (auto& x : f) x = rng.complex_normal();
    CHECK_THAT(dirac_seminorm(d, Element::function(x5, f)),
               WithinAbs(oracle::network_dirac_norm(c, f), 1e-9));
  }
}

TEST_CASE("dirac seminorm of point differences on weighted stars", "[dirac]") {
  // A 6-node star gives a 16x16 commutator, large enough to reach the
  // divide-and-conquer SVD path that returned a wrong top singular value.
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    RealMatrix c = RealMatrix::Zero(6, 6);
    for (int i = 1; i < 6; ++i) c(0, i) = c(i, 0) = rng.uniform(0.2, 2.0);
    auto x6 = counting_algebra(6);
    DiracOperator d = dirac(build_bimodule(network_cdc(x6, c, 1.0)));
    for (int p = 0; p < 6; ++p)
      for (int q = p + 1; q < 6; ++q) {
        std::vector<cplx> f(6, 0.0);
        f[p] = 1.0;
        f[q] = -1.0;
        CHECK_THAT(dirac_seminorm(d, Element::function(x6, f)),
                   WithinAbs(oracle::network_dirac_norm(c, f), 1e-9));
      }
  }
}

TEST_CASE("dirac_report", "[dirac]") {
  auto m2 = build_algebra({2}, {1});
  std::vector<CdCForm> forms{
      network_cdc(k3(), 0.5), network_cdc(edge(1.0), 0.5),
      commutator_cdc({unit(m2, 0, 0, 1), unit(m2, 0, 1, 0)}),
      commutator_cdc({unit(m2, 0, 0, 1)})};
  for (const auto& g : forms) {
    DiracReport rep = dirac_report(dirac(build_bimodule(g)), 5, 10);
    for (const auto& c : rep.checks()) {
      INFO(c.name << " residual " << c.residual);
      CHECK(c.passed);
    }
  }
}

TEST_CASE("dirac seminorm is a *-invariant Leibniz seminorm", "[dirac][property]") {
  auto alg = build_algebra({2, 1}, {1.0, 1.0});
  Rng rng(17);
  Matrix x = random_matrix(3, 3, rng);
  DiracOperator d = dirac(build_bimodule(spectral_triple_cdc(x + x.adjoint(), alg)));
  for (int trial = 0; trial < 10; ++trial) {
    Element a = random_element(alg, rng), b = random_element(alg, rng);
    const double la = dirac_seminorm(d, a), lb = dirac_seminorm(d, b);
    CHECK_THAT(dirac_seminorm(d, a.adjoint()), WithinAbs(la, 1e-10 * (1 + la)));
    CHECK(dirac_seminorm(d, a * b) <= la * b.norm() + a.norm() * lb + 1e-9);
  }
}

TEST_CASE("star_graph_check", "[dirac]") {
  StarGraphReport s = star_graph_check(ResistanceNetwork::from_conductances(star(3)));
  CHECK(s.is_star);
  CHECK(s.parallelogram_holds);
  CHECK(s.center == 0);

  StarGraphReport k = star_graph_check(ResistanceNetwork::from_conductances(k3()));
  CHECK_FALSE(k.is_star);
  CHECK_FALSE(k.parallelogram_holds);
  CHECK(k.witness.has_value());

  StarGraphReport e = star_graph_check(ResistanceNetwork::from_conductances(edge(1.0)));
  CHECK(e.is_star);
  CHECK(e.parallelogram_holds);
}
