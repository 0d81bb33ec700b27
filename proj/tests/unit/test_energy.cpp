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

#include "nca/energy.hpp"
#include "nca/network.hpp"
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

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Lindblad pair {e12, e21} on M2.
CdCForm lindblad_pair() {
  auto m2 = build_algebra({2}, {1});
  return commutator_cdc({unit(m2, 0, 0, 1), unit(m2, 0, 1, 0)});
}

}  // namespace

TEST_CASE("energy_form examples", "[energy]") {
  auto x3 = counting_algebra(3);
  EnergyForm e = energy_form(network_cdc(x3, k3(), 0.5));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if (x != y)
        CHECK_THAT(e(Element::delta(x3, x), Element::delta(x3, y)).real(),
                   WithinAbs(-1.0, 1e-14));
  Rng rng(1);
  Element a = random_element(x3, rng);
  CHECK(std::abs(e(Element::identity(x3), a)) < 1e-14);

  auto m2 = build_algebra({2}, {1});
  EnergyForm ev = energy_form(commutator_cdc({unit(m2, 0, 0, 1)}));
  CHECK_THAT(ev(unit(m2, 0, 0, 0), unit(m2, 0, 0, 0)).real(), WithinAbs(1.0, 1e-14));

  RealMatrix neg = k3();
  neg(0, 1) = neg(1, 0) = -0.1;
  CdCForm bad = network_cdc(neg, 0.5, true);
  CHECK_THROWS_AS(energy_form(bad), InputError);
  CHECK_NOTHROW(energy_form(bad, true));
}

TEST_CASE("laplacian examples", "[energy]") {
  Rng rng(19);
  RealMatrix c = random_conductances(5, 0.8, rng);
  auto x5 = counting_algebra(5);
  Laplacian lap = laplacian(energy_form(network_cdc(x5, c, 0.5)));
  CHECK(max_abs(lap.matrix() - oracle::graph_laplacian(c).cast<cplx>()) < 1e-12);

  auto m2 = build_algebra({2}, {1});
  std::vector<Element> vs{random_element(m2, rng), random_element(m2, rng)};
  Laplacian lv = laplacian(energy_form(commutator_cdc(vs)));
  SuperOperator expect = double_commutator(vs[0]) + double_commutator(vs[1]);
  CHECK(max_abs(lv.matrix() - expect.matrix()) < 1e-12);

  Laplacian zero = laplacian(energy_form(commutator_cdc({Element::identity(m2)})));
  CHECK(max_abs(zero.matrix()) < 1e-14);
  CHECK(zero.kernel_dim == 4);
}

TEST_CASE("laplacian invariants", "[energy][property]") {
  auto alg = build_algebra({2, 1}, {1.0, 2.5});
  Rng rng(23);
  CdCForm g = commutator_cdc({random_element(alg, rng), random_element(alg, rng)});
  EnergyForm e = energy_form(g);
  Laplacian lap = laplacian(e);
  const int d = alg->dim();
  double reproduce = 0.0, selfadj = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Element a = Element::basis(alg, i), b = Element::basis(alg, j);
      reproduce = std::max(reproduce, std::abs(tau_inner(a, lap(b)) - e(a, b)));
      selfadj = std::max(selfadj, std::abs(tau_inner(a, lap(b)) - tau_inner(lap(a), b)));
    }
  CHECK(reproduce < 1e-10);
  CHECK(selfadj < 1e-10);
  CHECK(lap(Element::identity(alg)).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(lap.matrix());
  CHECK(es.eigenvalues().minCoeff() >= -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff()));
}

TEST_CASE("gamma_delta", "[energy]") {
  auto m2 = build_algebra({2}, {1});
  Laplacian zero = make_laplacian(SuperOperator::zero(m2));
  CHECK(gamma_delta(zero).magnitude() < 1e-15);

  Rng rng(4);
  RealMatrix c = random_conductances(4, 1.0, rng);
  auto net = ResistanceNetwork::from_conductances(c);
  CHECK(gamma_delta(network_laplacian(net)).distance(network_cdc(c, 0.5)) < 1e-9);

  Laplacian lp = laplacian(energy_form(lindblad_pair()));
  CdCForm gd = gamma_delta(lp);
  for (int trial = 0; trial < 10; ++trial) {
    Element a = random_element(m2, rng);
    CHECK(is_positive(gd(a, a)));
  }
  CHECK(is_cdc(gd).is_cdc());
}

TEST_CASE("energy_seminorm", "[energy]") {
  auto x2 = counting_algebra(2);
  EnergyForm e = energy_form(network_cdc(x2, edge(1.0), 0.5));
  CHECK_THAT(energy_seminorm(e, Element::identity(x2), 1), WithinAbs(0.0, 1e-14));
  CHECK_THAT(energy_seminorm(e, Element::real_function(x2, {1, 0}), 1),
             WithinAbs(1.0, 1e-14));

  Rng rng(5);
  Element a = random_element(x2, rng);
  Element aa = direct_sum(a, 1, a, 1, x2);
  CHECK_THAT(energy_seminorm(e, aa, 2),
             WithinAbs(std::sqrt(2.0) * energy_seminorm(e, a, 1), 1e-12));
  CHECK_THROWS_AS(energy_seminorm(e, a, 2), InputError);
}

TEST_CASE("matricial seminorm properties", "[energy][property]") {
  EnergyForm e = energy_form(lindblad_pair());
  for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
    Check c = matricial_check(e, m, n, 99);
    INFO("m=" << m << " n=" << n << " residual " << c.residual);
    CHECK(c.passed);
  }
}

TEST_CASE("laplacian of the amplified form", "[energy][property]") {
  EnergyForm e = energy_form(lindblad_pair());
  Laplacian lap = laplacian(e);
  Laplacian big = laplacian(amplify_energy(e, 2));
  SuperOperator expect = amplify(lap.superop, 2);
  CHECK(max_abs(big.matrix() - expect.matrix()) < 1e-12);
}

TEST_CASE("markov_check", "[energy]") {
  auto x2 = counting_algebra(2);
  EnergyForm e = energy_form(network_cdc(x2, edge(1.0), 0.5));
  Rng rng(8);
  Element f = random_self_adjoint(x2, rng);
  std::vector<BatteryItem> affine{{"affine", [](const Element&) {
                                     return PiecewiseLinear::affine(1.0, 3.0);
                                   }}};
  Check c = markov_check(e, affine, {f});
  CHECK(c.passed);
  CHECK(c.residual < 1e-10);

  Element f20 = Element::real_function(x2, {2, 0});
  auto clamp = functional_calculus(f20, PiecewiseLinear::clamp_above(1.0)).value;
  CHECK_THAT(e.seminorm(clamp), WithinAbs(1.0, 1e-14));
  CHECK_THAT(e.seminorm(f20), WithinAbs(2.0, 1e-14));

  RealMatrix neg = k3();
  neg(0, 1) = neg(1, 0) = -0.1;
  EnergyForm bad = energy_form(network_cdc(neg, 0.5, true), true);
  Check fails = markov_suite(bad, 0, 10, {1});
  CHECK_FALSE(fails.passed);
  CHECK(fails.witness.has_value());
}

TEST_CASE("markov and leibniz suites pass on CdC examples", "[energy][property]") {
  auto x3 = counting_algebra(3);
  std::vector<EnergyForm> forms{energy_form(network_cdc(x3, k3(), 0.5)),
                                energy_form(lindblad_pair())};
  for (const auto& e : forms) {
    CHECK(markov_suite(e, 3, 20, {1, 2}).passed);
    CHECK(leibniz_suite(e, 3, 20).passed);
  }
  // a = b = 1
  const auto& e = forms[0];
  Check trivial = leibniz_check(e, {{Element::identity(x3), Element::identity(x3)}});
  CHECK(trivial.passed);
}

TEST_CASE("reality_checks", "[energy]") {
  Rng rng(3);
  RealityReport comm = reality_checks(network_cdc(random_conductances(4, 0.9, rng), 0.5));
  CHECK(comm.real());
  CHECK(comm.balanced());

  auto m2 = build_algebra({2}, {1});
  RealityReport one = reality_checks(commutator_cdc({unit(m2, 0, 0, 1)}));
  CHECK_FALSE(one.real());
  CHECK_FALSE(one.balanced());

  auto m3 = build_algebra({3}, {1});
  Matrix v(3, 3);
  v.setZero();
  v(0, 0) = 1;
  v(1, 1) = cplx(0, 1);
  RealityReport cx = reality_checks(commutator_cdc({Element(m3, {v})}));
  CHECK(cx.real());
  CHECK_FALSE(cx.balanced());
  CHECK(cx.tau_balanced.witness.has_value());
}

TEST_CASE("tau-real iff the laplacian preserves the involution", "[energy][property]") {
  auto m2 = build_algebra({2}, {1});
  auto m3 = build_algebra({3}, {1});
  Matrix v(3, 3);
  v.setZero();
  v(0, 0) = 1;
  v(1, 1) = cplx(0, 1);
  Rng rng(12);
  std::vector<CdCForm> forms{
      commutator_cdc({unit(m2, 0, 0, 1)}), lindblad_pair(),
      commutator_cdc({Element(m3, {v})}),
      commutator_cdc({random_element(m2, rng)}),
      network_cdc(random_conductances(4, 1.0, rng), 0.5)};
  for (const auto& g : forms) {
    Laplacian lap = laplacian(energy_form(g));
    const bool preserves = involution_defect(lap.superop) < 1e-9;
    CHECK(reality_checks(g).real() == preserves);
    // tau(Gamma_Delta(a, b)) = (E(a, b) + E(b*, a*)) / 2
    CdCForm gd = gamma_delta(lap);
    EnergyForm e = energy_form(g);
    double worst = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        Element a = Element::basis(g.algebra(), i), b = Element::basis(g.algebra(), j);
        cplx avg = 0.5 * (e(a, b) + e(b.adjoint(), a.adjoint()));
        worst = std::max(worst, std::abs(gd(a, b).tau() - avg));
      }
    CHECK(worst < 1e-9);
    // Gamma = Gamma_Delta iff tau-balanced
    CHECK((g.distance(gd) < 1e-9) == reality_checks(g).balanced());
  }
}

TEST_CASE("heat_map", "[energy]") {
  auto x2 = counting_algebra(2);
  Laplacian lap = laplacian(energy_form(network_cdc(x2, edge(1.0), 0.5)));
  HeatMap h0 = heat_map(lap, 0.0);
  CHECK(max_abs(h0.map.matrix() - Matrix::Identity(2, 2)) < 1e-14);
  for (double t : {0.0, 0.1, 1.0, 10.0}) {
    HeatMap h = heat_map(lap, t);
    CHECK(h.unital);
    CHECK(h.cp);
    Element out = h.map(Element::real_function(x2, {1, 0}));
    auto vals = out.real_values();
    CHECK_THAT(vals[0], WithinAbs((1 + std::exp(-2 * t)) / 2, 1e-10));
    CHECK_THAT(vals[1], WithinAbs((1 - std::exp(-2 * t)) / 2, 1e-10));
  }
  CHECK_THROWS_AS(heat_map(lap, -1.0), InputError);
}

TEST_CASE("heat kernel matches the matrix exponential", "[energy]") {
  Rng rng(31);
  RealMatrix c = random_conductances(5, 0.7, rng);
  auto net = ResistanceNetwork::from_conductances(c);
  Laplacian lap = network_laplacian(net);
  for (double t : {0.1, 1.0, 3.0}) {
    HeatMap h = heat_map(lap, t);
    RealMatrix ref = oracle::heat_kernel(c, t);
    CHECK(max_abs(h.map.matrix() - ref.cast<cplx>()) < 1e-10);
  }
}

TEST_CASE("semigroup law and generator", "[energy][property]") {
  Laplacian lap = laplacian(energy_form(lindblad_pair()));
  Matrix ps = heat_map(lap, 0.3).map.matrix();
  Matrix pt = heat_map(lap, 0.9).map.matrix();
  Matrix pst = heat_map(lap, 1.2).map.matrix();
  CHECK(max_abs(ps * pt - pst) < 1e-9);

  const double h = 1e-5;
  Matrix deriv = (heat_map(lap, h).map.matrix() - Matrix::Identity(4, 4)) / h;
  CHECK(max_abs(deriv + lap.matrix()) <= 1e-4 * max_abs(lap.matrix()));
}

TEST_CASE("heat maps of a matrix example are completely positive", "[energy]") {
  Laplacian lap = laplacian(energy_form(lindblad_pair()));
  for (double t : {0.1, 1.0, 10.0}) {
    HeatMap h = heat_map(lap, t);
    CHECK(h.cp);
    CHECK(h.choi_min_eigenvalue >= -1e-9);
  }
  // A map that is positive but not CP: the transpose on M2.
  auto m2 = build_algebra({2}, {1});
  SuperOperator transpose = SuperOperator::from_map(m2, [&](const Element& a) {
    return Element(m2, {a.block(0).transpose()});
  });
  CHECK(choi_min_eigenvalue(transpose) < -0.1);
}

TEST_CASE("resolvent_check", "[energy]") {
  auto x3 = counting_algebra(3);
  Laplacian lap = laplacian(energy_form(network_cdc(x3, k3(), 0.5)));
  CHECK(resolvent_check(lap.superop, {0.0, 0.1, 1.0, 10.0}, 5).passed);
  for (double t : {0.1, 1.0, 10.0}) {
    Matrix r = (Matrix::Identity(3, 3) + t * lap.matrix()).inverse();
    Vector out = r * Element::delta(x3, 0).onb_coords();
    for (int x = 0; x < 3; ++x) CHECK(out(x).real() >= 0.0);
    Vector one = r * Element::identity(x3).onb_coords();
    CHECK(max_abs(one - Element::identity(x3).onb_coords()) < 1e-12);
  }
  Laplacian lp = laplacian(energy_form(lindblad_pair()));
  CHECK(resolvent_check(lp.superop, {0.1, 1.0, 10.0}, 5).passed);
}

TEST_CASE("cdc_from_dirichlet_form", "[energy]") {
  CdCForm g = lindblad_pair();
  EnergyForm e = energy_form(g);
  DirichletReconstruction rec = cdc_from_dirichlet_form(e);
  REQUIRE(rec.ok());
  CHECK(rec.cdc_report.is_cdc());
  CHECK(rec.trace_pairing.passed);
  CHECK(rec.cdc->distance(gamma_delta(laplacian(e))) == 0.0);

  // Variance form on C^2 with the uniform state.
  auto c2 = counting_algebra(2);
  Matrix var(2, 2);
  var << 0.25, -0.25, -0.25, 0.25;
  DirichletReconstruction v = cdc_from_dirichlet_form(EnergyForm(c2, var));
  REQUIRE(v.ok());
  Element d1 = Element::delta(c2, 0);
  // E(d1, d1) = 1/2 - 1/4
  CHECK_THAT(v.cdc->operator()(d1, d1).tau().real(), WithinAbs(0.25, 1e-12));

  RealMatrix neg = k3();
  neg(0, 1) = neg(1, 0) = -0.1;
  DirichletReconstruction bad =
      cdc_from_dirichlet_form(energy_form(network_cdc(neg, 0.5, true), true));
  CHECK_FALSE(bad.ok());
  CHECK_FALSE(bad.markov.passed);
  CHECK(bad.markov.witness.has_value());
}

TEST_CASE("connectedness", "[energy]") {
  auto x3 = counting_algebra(3);
  CHECK(connectedness(laplacian(energy_form(network_cdc(x3, k3(), 0.5)))));
  RealMatrix two_edges = RealMatrix::Zero(4, 4);
  two_edges(0, 1) = two_edges(1, 0) = 1;
  two_edges(2, 3) = two_edges(3, 2) = 1;
  CHECK_FALSE(connectedness(laplacian(energy_form(network_cdc(two_edges, 0.5)))));
  CHECK(connectedness(laplacian(energy_form(lindblad_pair()))));
}
