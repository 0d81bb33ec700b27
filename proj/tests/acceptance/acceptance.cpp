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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nca/dirac.hpp"
#include "nca/network.hpp"
#include "nca/quotient.hpp"
#include "nca/stddev.hpp"
#include "oracles.hpp"

using namespace nca;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

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

RealMatrix connected_random(int n, double p, Rng& rng) {
  RealMatrix c = random_conductances(n, p, rng);
  for (int i = 0; i + 1 < n; ++i)
    if (c(i, i + 1) == 0.0) c(i, i + 1) = c(i + 1, i) = rng.uniform(0.1, 2.0);
  return c;
}

Element diag_1_i_0(const AlgebraPtr& m3) {
  Matrix v = Matrix::Zero(3, 3);
  v(0, 0) = 1;
  v(1, 1) = cplx(0, 1);
  return Element(m3, {v});
}

SuperOperator permutation_auto(const AlgebraPtr& alg, const std::vector<int>& perm) {
  return SuperOperator::from_map(alg, [&](const Element& f) {
    auto v = f.values();
    std::vector<cplx> out(v.size());
    for (std::size_t x = 0; x < v.size(); ++x) out[x] = v[perm[x]];
    return Element::function(alg, out);
  });
}

SuperOperator unitary_auto(const AlgebraPtr& alg, Rng& rng) {
  const int n = alg->block_size(0);
  Matrix u = random_matrix(n, n, rng).householderQr().householderQ();
  return SuperOperator::from_map(alg, [&, u](const Element& a) {
    return Element(alg, {u * a.block(0) * u.adjoint()});
  });
}

// The CdC examples used throughout: name, form.
std::vector<std::pair<std::string, CdCForm>> cdc_examples() {
  auto m2 = build_algebra({2}, {1});
  auto m3 = build_algebra({3}, {1});
  auto c2 = counting_algebra(2);
  auto mixed = build_algebra({2, 1}, {1.0, 2.0});
  Rng rng(2024);
  SuperOperator swap = permutation_auto(c2, {1, 0});
  auto c4 = counting_algebra(4);
  Matrix d = random_matrix(3, 3, rng);
  Element p(mixed, {Matrix::Identity(2, 2) * 0.1, Matrix::Identity(1, 1) * 0.4});
  return {
      {"K3", network_cdc(k3(), 0.5)},
      {"two-point", network_cdc(edge(1.0), 0.5)},
      {"random network", network_cdc(connected_random(5, 0.5, rng), 0.5)},
      {"M2 {e12,e21}", commutator_cdc({unit(m2, 0, 0, 1), unit(m2, 0, 1, 0)})},
      {"M2 {e12}", commutator_cdc({unit(m2, 0, 0, 1)})},
      {"M3 diag(1,i,0)", commutator_cdc({diag_1_i_0(m3)})},
      {"M2+C random vs", commutator_cdc({random_element(mixed, rng), random_element(mixed, rng)})},
      {"C2 swap action", group_action_cdc({swap}, {1.0})},
      {"C4 cycle action", group_action_cdc({permutation_auto(c4, {1, 2, 3, 0}),
                                            permutation_auto(c4, {3, 0, 1, 2})},
                                           {0.7, 0.7})},
      {"M2+C spectral triple", spectral_triple_cdc(d + d.adjoint(), mixed)},
      {"M2+C stddev", independent_copies_cdc(mixed, p)},
  };
}

// Hermitian PSD operator the heat semigroup runs on: Delta itself when it
// preserves the involution, otherwise its natural part.
Laplacian heat_generator(const CdCForm& g) {
  Laplacian lap = laplacian(energy_form(g));
  if (involution_defect(lap.superop) > 1e-9) lap = natural_part(lap);
  return lap;
}

// --- criteria -------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  Rng rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    RealMatrix c = random_conductances(n, 0.7, rng);
    CdCForm g = network_cdc(c, 0.5);
    worst = std::max(worst, (conductances_from_cdc(g) - c).cwiseAbs().maxCoeff());
    o.require(is_cdc(g).is_cdc(), "is_cdc failed on trial " + std::to_string(trial));
  }
  o.require(worst <= 1e-10, "round trip error too large");
  o.detail << (o.ok ? "" : "; ") << "20 networks, max round-trip error " << worst;
  return o;
}

Outcome criterion2() {
  Outcome o;
  Rng rng(2);
  std::vector<SuperOperator> gens;
  for (int k = 0; k < 7; ++k) {
    RealMatrix c = connected_random(3 + k % 3, 0.6, rng);
    if (k % 3 == 2) c(0, 1) = c(1, 0) = -0.3;
    RealMatrix lap = oracle::graph_laplacian(c);
    gens.emplace_back(counting_algebra(static_cast<int>(c.rows())), lap.cast<cplx>());
  }
  auto m2 = build_algebra({2}, {1});
  auto mixed = build_algebra({2, 1}, {1.0, 0.5});
  for (int k = 0; k < 7; ++k) {
    auto alg = k % 2 ? m2 : mixed;
    SuperOperator n = lindblad_generator(random_element(alg, rng));
    n = n + lindblad_generator(random_element(alg, rng));
    if (k == 3) n = n * cplx(-1.0);
    gens.push_back(n);
  }
  auto c3 = counting_algebra(3);
  for (int k = 0; k < 6; ++k) {
    std::vector<SuperOperator> autos;
    std::vector<double> w;
    if (k < 3) {
      autos = {permutation_auto(c3, {1, 2, 0}), permutation_auto(c3, {1, 0, 2})};
    } else {
      autos = {unitary_auto(m2, rng), unitary_auto(m2, rng)};
    }
    w = {rng.uniform(0.2, 1.5), k % 3 == 1 ? -0.5 : rng.uniform(0.2, 1.5)};
    const auto& alg = autos[0].algebra();
    SuperOperator n = SuperOperator::zero(alg);
    for (std::size_t i = 0; i < autos.size(); ++i)
      n = n + (SuperOperator::identity(alg) - autos[i]) * cplx(w[i]);
    gens.push_back(n);
  }
  int disagree = 0, cp_count = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const bool ccn = ccn_check(gens[i], i).passed;
    const bool cp = is_cdc(gamma_from_generator(gens[i], 1.0)).completely_positive.passed;
    cp_count += cp;
    if (ccn != cp) ++disagree;
  }
  o.require(disagree == 0, std::to_string(disagree) + " disagreements");
  o.require(cp_count > 0 && cp_count < static_cast<int>(gens.size()),
            "generator set does not exercise both outcomes");
  o.detail << (o.ok ? "" : "; ") << gens.size() << " generators (" << cp_count
           << " CP), " << disagree << " disagreements";
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto net = ResistanceNetwork::from_conductances(k3());
  const double sp = oracle::parallel(1.0, oracle::series(1.0, 1.0));
  Laplacian lap = network_laplacian(net);
  double err_r = 0.0, err_e = 0.0;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      if (p == q) continue;
      err_r = std::max(err_r, std::abs(resistance_distance(net, p, q) - sp));
      const double re = energy_metric(lap, State::point(net.algebra(), p),
                                      State::point(net.algebra(), q));
      err_e = std::max(err_e, std::abs(re - std::sqrt(2.0 / 3.0)));
    }
  o.require(err_r <= 1e-10, "K3 resistance off");
  o.require(err_e <= 1e-10, "K3 energy metric off");

  Rng rng(3);
  int violations = 0;
  double oracle_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(3, 8);
    RealMatrix c = connected_random(n, 0.4, rng);
    RealMatrix r = resistance_matrix(ResistanceNetwork::from_conductances(c));
    oracle_err = std::max(oracle_err, (r - oracle::effective_resistance(c)).cwiseAbs().maxCoeff());
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (r(x, z) > r(x, y) + r(y, z) + 1e-10) ++violations;
  }
  o.require(violations == 0, std::to_string(violations) + " triangle violations");
  o.require(oracle_err <= 1e-10, "resistance disagrees with pseudo-inverse oracle");
  o.detail << (o.ok ? "" : "; ") << "rho_r err " << err_r << ", rho_E err " << err_e
           << ", 50 networks triangle ok, oracle err " << oracle_err;
  return o;
}

Outcome criterion4() {
  Outcome o;
  MetricReport rep = metric_checks(ResistanceNetwork::from_conductances(k3()), 0);
  o.require(rep.mixture.has_value(), "no mixture witness found");
  const double v = rep.mixture ? rep.mixture->violation : 0.0;
  o.require(v > 1e-6, "violation too small");
  o.detail << (o.ok ? "" : "; ") << "violation " << v << " over " << rep.grid_points
           << " grid states";
  return o;
}

Outcome criterion5() {
  Outcome o;
  int forms = 0;
  std::size_t evaluated = 0;
  for (const auto& [name, g] : cdc_examples()) {
    EnergyForm e = energy_form(g);
    Check m = markov_suite(e, 5, 20, {1, 2});
    Check l = leibniz_suite(e, 5, 20);
    o.require(m.passed, name + ": Markov violated (residual " + std::to_string(m.residual) + ")");
    o.require(l.passed, name + ": Leibniz violated (residual " + std::to_string(l.residual) + ")");
    evaluated += m.evaluated + l.evaluated;
    ++forms;
  }
  RealMatrix neg = k3();
  neg(0, 1) = neg(1, 0) = -0.1;
  MarkovViolation w = markov_violation_witness(neg);
  o.require(w.found && w.violation > 0.0, "no witness for the negative conductance");
  Check bad = markov_suite(energy_form(network_cdc(neg, 0.5, true), true), 5, 20, {1});
  o.require(!bad.passed && bad.witness.has_value(), "battery misses the negative conductance");
  o.detail << (o.ok ? "" : "; ") << forms << " forms, " << evaluated
           << " evaluations; negative-conductance witness r=" << w.r
           << " violation=" << w.violation;
  return o;
}

Outcome criterion6() {
  Outcome o;
  int runs = 0;
  for (const auto& [name, g] : cdc_examples()) {
    EnergyForm e = energy_form(g);
    for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
      Check c = matricial_check(e, m, n, 6);
      o.require(c.passed, name + " (" + std::to_string(m) + "," + std::to_string(n) + ")");
      ++runs;
    }
  }
  o.detail << (o.ok ? "" : "; ") << runs << " (form, m, n) combinations";
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto m2 = build_algebra({2}, {1});
  std::vector<std::pair<std::string, CdCForm>> cases{
      {"K3", network_cdc(k3(), 0.5)},
      {"two-point", network_cdc(edge(1.0), 0.5)},
      {"M2 {e12,e21}", commutator_cdc({unit(m2, 0, 0, 1), unit(m2, 0, 1, 0)})},
      {"M2 {e12}", commutator_cdc({unit(m2, 0, 0, 1)})}};
  double fact = 0.0, norm = 0.0;
  bool one_sided = false;
  for (const auto& [name, g] : cases) {
    DiracOperator d = dirac(build_bimodule(g));
    // d*d against the Laplacian of the energy form.
    const int r = d.omega_dim, n = d.base_dim;
    Matrix dd = d.matrix.bottomLeftCorner(r, n);
    Matrix lap = laplacian(energy_form(g)).matrix();
    fact = std::max(fact, (dd.adjoint() * dd - lap).cwiseAbs().maxCoeff());
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      Element a = random_element(g.algebra(), rng);
      const double lhs = dirac_seminorm(d, a);
      const double ga = std::sqrt(operator_norm(g(a, a)));
      const double gs = std::sqrt(operator_norm(g(a.adjoint(), a.adjoint())));
      norm = std::max(norm, std::abs(lhs - std::max(ga, gs)));
      if (std::abs(ga - gs) > 1e-3) one_sided = true;
    }
  }
  o.require(fact <= 1e-9, "d*d differs from Delta");
  o.require(norm <= 1e-8, "norm formula off");
  o.require(one_sided, "no sample separates the two gradients");
  o.detail << (o.ok ? "" : "; ") << "factorization err " << fact << ", norm formula err " << norm;
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto m2 = build_algebra({2}, {1});
  Element e12 = unit(m2, 0, 0, 1), e21 = unit(m2, 0, 1, 0);
  auto balance = [](const std::vector<Element>& vs) {
    Element s = Element::zero(vs[0].algebra());
    for (const auto& v : vs) s += commutator(v.adjoint(), v);
    return operator_norm(s);
  };
  const double one = balance({e12});
  const double pair = balance({e12, e21});
  const bool real_one = reality_checks(commutator_cdc({e12})).real();
  const bool real_pair = reality_checks(commutator_cdc({e12, e21})).real();
  o.require(!real_one, "{e12} reported tau-real");
  o.require(real_pair, "{e12,e21} reported not tau-real");
  o.require(one > 1e-12, "sum of [v*,v] vanishes for {e12}");
  o.require(pair <= 1e-12, "sum of [v*,v] nonzero for {e12,e21}");
  o.detail << (o.ok ? "" : "; ") << "||sum [v*,v]||: {e12} " << one << ", {e12,e21} " << pair;
  return o;
}

Outcome criterion9() {
  Outcome o;
  auto m3 = build_algebra({3}, {1});
  Element v = diag_1_i_0(m3);
  Element b = unit(m3, 0, 1, 0) + unit(m3, 0, 2, 1);
  Element a = b.adjoint();
  Element as = a.adjoint(), vs = v.adjoint();
  Element bal = commutator(v, as) * commutator(b, vs) - commutator(as, vs) * commutator(v, b);
  const double residual = operator_norm(bal);
  CdCForm g = commutator_cdc({v});
  RealityReport rr = reality_checks(g);
  const double gap = g.distance(gamma_delta(laplacian(energy_form(g))));
  o.require(rr.real(), "not tau-real");
  o.require(!rr.balanced(), "reported tau-balanced");
  o.require(residual > 1e-6, "shift witness does not violate the balance identity");
  o.require(gap > 1e-6, "Gamma equals Gamma_Delta");

  Rng rng(9);
  double net_gap = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    RealMatrix c = random_conductances(3 + trial % 4, 0.8, rng);
    CdCForm gn = network_cdc(c, 0.5);
    net_gap = std::max(net_gap, gn.distance(gamma_delta(laplacian(energy_form(gn)))));
    o.require(reality_checks(gn).balanced(), "network not tau-balanced");
  }
  o.require(net_gap <= 1e-9, "network Gamma differs from Gamma_Delta");
  o.detail << (o.ok ? "" : "; ") << "balance residual " << residual << ", ||Gamma - Gamma_Delta|| "
           << gap << ", networks " << net_gap;
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto net = ResistanceNetwork::from_conductances(k3());
  QuotientData qd = split(network_laplacian(net), projection_from_blocks(net.algebra(), {0, 1}));
  RealMatrix expect(2, 2);
  expect << 1.5, -1.5, -1.5, 1.5;
  const double schur = (qd.quotient_laplacian.matrix() - expect.cast<cplx>()).cwiseAbs().maxCoeff();
  o.require(schur <= 1e-12, "K3 Schur complement off");

  Rng rng(10);
  double inf_err = 0.0;
  for (int t = 0; t < 20; ++t) {
    Vector b = random_element(qd.sub, rng).onb_coords();
    const double q = b.dot(qd.quotient_laplacian.matrix() * b).real();
    inf_err = std::max(inf_err, std::abs(q - oracle::fiber_infimum(qd.ambient_laplacian.matrix(),
                                                                   qd.b_index, qd.c_index, b)));
  }
  o.require(inf_err <= 1e-9, "Schur disagrees with fiber infimum");

  QuotientReport rep = quotient_checks(qd, 10, 20);
  o.require(rep.reconstruction.passed, "quotient is not a CdC energy form");
  o.require(rep.markov.passed, "quotient not Markov at n=1,2");
  o.require(rep.passed(), "quotient report failed");

  RealMatrix c5 = connected_random(5, 0.6, rng);
  auto net5 = ResistanceNetwork::from_conductances(c5);
  QuotientData first = split(network_laplacian(net5), projection_from_blocks(net5.algebra(), {0, 1, 2, 3}));
  QuotientData second = split(first.quotient_laplacian, projection_from_blocks(first.sub, {0, 1, 3}));
  o.require(quotient_checks(first, 11).passed(), "first quotient of 5-node network failed");
  o.require(quotient_checks(second, 12).passed(), "iterated quotient failed");
  o.detail << (o.ok ? "" : "; ") << "Schur err " << schur << ", infimum err " << inf_err;
  return o;
}

Outcome criterion11() {
  Outcome o;
  const std::vector<double> ts{0.0, 0.1, 1.0, 10.0};
  double choi = 0.0;
  int forms = 0;
  for (const auto& [name, g] : cdc_examples()) {
    Laplacian lap = heat_generator(g);
    for (double t : ts) {
      HeatMap h = heat_map(lap, t);
      choi = std::min(choi, h.choi_min_eigenvalue);
      o.require(h.unital, name + ": not unital at t=" + std::to_string(t));
      o.require(h.choi_min_eigenvalue >= -1e-9, name + ": not CP at t=" + std::to_string(t));
    }
    Check r = resolvent_check(lap.superop, ts, 11);
    o.require(r.passed, name + ": resolvent check failed");
    ++forms;
  }
  auto x2 = counting_algebra(2);
  Laplacian l2 = laplacian(energy_form(network_cdc(x2, edge(1.0), 0.5)));
  double closed = 0.0;
  for (double t : ts) {
    auto v = heat_map(l2, t).map(Element::real_function(x2, {1, 0})).real_values();
    closed = std::max({closed, std::abs(v[0] - (1 + std::exp(-2 * t)) / 2),
                       std::abs(v[1] - (1 - std::exp(-2 * t)) / 2)});
  }
  o.require(closed <= 1e-10, "two-point closed form off");
  o.detail << (o.ok ? "" : "; ") << forms << " forms x 4 times, min Choi eigenvalue " << choi
           << ", closed-form err " << closed;
  return o;
}

Outcome criterion12() {
  Outcome o;
  auto c2 = counting_algebra(2);
  auto m2 = build_algebra({2}, {1});
  auto mixed = build_algebra({2, 1}, {1.0, 2.0});
  std::vector<std::pair<AlgebraPtr, Element>> cases{
      {c2, Element::real_function(c2, {0.5, 0.5})},
      {c2, Element::real_function(c2, {0.3, 0.7})},
      {m2, Element::identity(m2) * 0.5},
      {mixed, Element(mixed, {Matrix::Identity(2, 2) * 0.1, Matrix::Identity(1, 1) * 0.4})}};
  double routes = 0.0;
  for (const auto& [alg, p] : cases) {
    StddevReport rep = stddev_report(alg, p, 12, 20);
    routes = std::max({routes, rep.schur_vs_closed, rep.schur_vs_cdc, rep.closed_vs_cdc});
    for (const auto& c : rep.checks()) o.require(c.passed, alg->describe() + ": " + c.name);
  }
  o.require(routes <= 1e-9, "routes disagree");
  const double s1 = stddev_seminorm(Element::real_function(c2, {0.5, 0.5}),
                                    Element::real_function(c2, {1, 0}));
  const double s2 = stddev_seminorm(Element::identity(m2) * 0.5, unit(m2, 0, 0, 0));
  o.require(std::abs(s1 - 0.5) <= 1e-12, "C2 value off");
  o.require(std::abs(s2 - 0.5) <= 1e-12, "M2 value off");
  o.detail << (o.ok ? "" : "; ") << "max route residual " << routes << ", values " << s1 << ", "
           << s2;
  return o;
}

bool sparsity_star(const RealMatrix& c) {
  const int n = static_cast<int>(c.rows());
  for (int center = 0; center < n; ++center) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      for (int y = x + 1; y < n && ok; ++y) {
        const bool touches = x == center || y == center;
        if (touches && c(x, y) == 0.0) ok = false;
        if (!touches && c(x, y) != 0.0) ok = false;
      }
    if (ok) return true;
  }
  return false;
}

Outcome criterion13() {
  Outcome o;
  Rng rng(13);
  int agree = 0, total = 0, stars = 0;
  for (int t = 0; t < 20; ++t) {
    RealMatrix c;
    if (t < 10) {
      const int n = rng.integer(3, 7);
      const int center = rng.integer(0, n - 1);
      c = RealMatrix::Zero(n, n);
      for (int x = 0; x < n; ++x)
        if (x != center) c(x, center) = c(center, x) = rng.uniform(0.2, 2.0);
    } else {
      do {
        c = connected_random(rng.integer(3, 7), 0.5, rng);
      } while (sparsity_star(c));
    }
    const bool expect = sparsity_star(c);
    stars += expect;
    StarGraphReport rep = star_graph_check(ResistanceNetwork::from_conductances(c), 1.0, t);
    const bool ok = rep.is_star == expect && rep.parallelogram_holds == expect;
    agree += ok;
    ++total;
    o.require(ok, "network " + std::to_string(t) + " flags disagree");
  }
  o.require(stars == 10, "generator produced the wrong mix");
  o.detail << (o.ok ? "" : "; ") << agree << "/" << total << " agree (" << stars << " stars)";
  return o;
}

Outcome criterion14() {
  Outcome o;
  int real_forms = 0;
  double pairing = 0.0;
  for (const auto& [name, g] : cdc_examples()) {
    if (!reality_checks(g).real()) continue;
    ++real_forms;
    EnergyForm e = energy_form(g);
    DirichletReconstruction rec = cdc_from_dirichlet_form(e, true, 14);
    o.require(rec.ok(), name + ": reconstruction refused");
    if (!rec.ok()) continue;
    o.require(is_cdc(*rec.cdc).is_cdc(), name + ": result is not a CdC");
    const int d = g.dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        pairing = std::max(pairing, std::abs(rec.cdc->gram(i, j).tau() - e.gram()(i, j)));
  }
  o.require(pairing <= 1e-9, "trace pairing off");
  RealMatrix neg = k3();
  neg(0, 1) = neg(1, 0) = -0.1;
  DirichletReconstruction bad =
      cdc_from_dirichlet_form(energy_form(network_cdc(neg, 0.5, true), true), true, 14);
  o.require(!bad.ok(), "negative-conductance form accepted");
  o.require(!bad.markov.passed && bad.markov.witness.has_value(), "no Markov witness");
  o.detail << (o.ok ? "" : "; ") << real_forms << " tau-real forms, pairing err " << pairing;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"network CdC round trip", criterion1},
      {"CCN agrees with complete positivity", criterion2},
      {"K3 resistance and triangle inequality", criterion3},
      {"squared energy metric fails the triangle inequality on mixtures", criterion4},
      {"Markov and Leibniz suites", criterion5},
      {"L2-matricial seminorms", criterion6},
      {"d*d = Delta and the Dirac norm formula", criterion7},
      {"detailed balance", criterion8},
      {"tau-balanced counterexample", criterion9},
      {"Schur-complement quotients", criterion10},
      {"heat semigroup and resolvents", criterion11},
      {"standard deviation", criterion12},
      {"star graphs and the parallelogram law", criterion13},
      {"Dirichlet form reconstruction", criterion14},
  };
  int failures = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "exception: " << e.what();
    }
    failures += !o.ok;
    std::printf("%s criterion %zu: %s (%s)\n", o.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/%zu criteria passed in %.1f s\n",
              static_cast<int>(criteria.size()) - failures, criteria.size(), secs);
  return failures ? 1 : 0;
}
