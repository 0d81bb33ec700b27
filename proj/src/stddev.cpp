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

#include "nca/stddev.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "nca/random.hpp"

namespace nca {

namespace {

void validate_weight(const AlgebraPtr& base, const Element& p, const Tolerances& tol) {
  if (!same_algebra(base, p.algebra()))
    throw InputError("stddev: weight element lives on a different algebra");
  const double ctol = 1e-10;
  for (int k = 0; k < base->dim(); ++k)
    if (commutator(p, Element::basis(base, k)).norm() > ctol)
      throw InputError(
          "stddev: weight element must be central (non-tracial states are out of scope)");
  if (!p.is_self_adjoint(ctol))
    throw InputError("stddev: weight element must be self-adjoint");
  for (int b = 0; b < p.num_blocks(); ++b)
    if (p.block(b)(0, 0).real() <= 0.0)
      throw InputError("stddev: weight element must be strictly positive");
  if (std::abs(p.tau() - 1.0) > tol.eq)
    throw InputError("stddev: weight element must satisfy tau(p) = 1");
}

// Central positive p is a positive scalar on each block.
Element central_sqrt(const Element& p) {
  Element q = p;
  for (int b = 0; b < q.num_blocks(); ++b)
    q.block(b) *= 1.0 / std::sqrt(p.block(b)(0, 0).real());
  return q;
}

Matrix hermitian(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Sum of simple tensors c * (x (x) y).
struct Tensor {
  std::vector<std::pair<Element, Element>> terms;
};

Element pairing(const Tensor& s, const Tensor& t) {
  Element out(s.terms.front().first.algebra());
  for (const auto& [x, y] : s.terms)
    for (const auto& [z, w] : t.terms) out += (y.adjoint() * w) * (0.5 * (x.adjoint() * z).tau());
  return out;
}

void record(Check& c, double diff, double bound, Witness w) {
  ++c.evaluated;
  if (diff > c.residual) {
    c.residual = diff;
    c.witness = std::move(w);
  }
  if (diff > bound) {
    c.passed = false;
    ++c.violations;
  }
}

}  // namespace

Element ExtendedAlgebra::pack(const Element& a, cplx alpha) const {
  std::vector<Matrix> blocks = a.blocks();
  blocks.push_back(Matrix::Constant(1, 1, alpha));
  return Element(extended, std::move(blocks));
}

ExtendedAlgebra extend(const AlgebraPtr& base, const Element& p, const Tolerances& tol) {
  validate_weight(base, p, tol);
  ExtendedAlgebra ea;
  ea.base = base;
  ea.weight = p;
  std::vector<int> blocks = base->blocks();
  std::vector<double> weights = base->weights();
  blocks.push_back(1);
  weights.push_back(1.0);
  ea.extended = build_algebra(blocks, weights);
  int nb = base->num_blocks();

  auto unpack = [&](const Element& x) {
    std::vector<Matrix> bl(x.blocks().begin(), x.blocks().begin() + nb);
    return std::make_pair(Element(base, std::move(bl)), x.block(nb)(0, 0));
  };
  SuperOperator op = SuperOperator::from_map(ea.extended, [&](const Element& x) {
    auto [b, beta] = unpack(x);
    Element diff = b - Element::identity(base) * beta;
    return ea.pack(p * diff, beta - ea.mu(b));
  });
  ea.laplacian = make_laplacian(op, tol);

  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian(op.matrix()), Eigen::EigenvaluesOnly);
  double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -tol.pos * top)
    throw InputError("stddev: extended Laplacian is not positive");

  // <(a, alpha), Delta (b, beta)> = mu((a - alpha)* (b - beta)) and
  // 2 Gamma_Delta = (p (a - alpha)* (b - beta), mu((a - alpha)* (b - beta))).
  int d = ea.extended->dim();
  CdCForm gamma = gamma_delta(ea.laplacian, tol);
  Element one = Element::identity(base);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Element x = Element::basis(ea.extended, i);
      Element y = Element::basis(ea.extended, j);
      auto [a, alpha] = unpack(x);
      auto [b, beta] = unpack(y);
      Element prod = (a - one * alpha).adjoint() * (b - one * beta);
      cplx m = ea.mu(prod);
      ea.pairing_residual =
          std::max(ea.pairing_residual, std::abs(tau_inner(x, ea.laplacian(y)) - m));
      Element expect = ea.pack(p * prod, m);
      ea.cdc_residual = std::max(ea.cdc_residual, (gamma(x, y) * 2.0).distance(expect));
    }
  return ea;
}

Laplacian stddev_laplacian(const ExtendedAlgebra& ea, const Tolerances& tol) {
  std::vector<int> keep(ea.base->num_blocks());
  for (int b = 0; b < ea.base->num_blocks(); ++b) keep[b] = b;
  QuotientData qd = split(ea.laplacian, projection_from_blocks(ea.extended, keep), tol);
  return make_laplacian(SuperOperator(ea.base, qd.quotient_laplacian.matrix()), tol);
}

Laplacian stddev_closed_form(const AlgebraPtr& base, const Element& p,
                             const Tolerances& tol) {
  validate_weight(base, p, tol);
  Element one = Element::identity(base);
  return make_laplacian(SuperOperator::from_map(base,
                                                [&](const Element& a) {
                                                  return p * (a - one * (p * a).tau());
                                                }),
                        tol);
}

double stddev_seminorm(const Element& p, const Element& a) {
  Element c = a - Element::identity(a.algebra()) * (p * a).tau();
  return std::sqrt(std::max(0.0, (p * (c.adjoint() * c)).tau().real()));
}

CdCForm independent_copies_cdc(const AlgebraPtr& base, const Element& p) {
  validate_weight(base, p, {});
  Element q = central_sqrt(p);
  Element one = Element::identity(base);
  int d = base->dim();
  std::vector<Tensor> diffs;
  for (int k = 0; k < d; ++k) {
    Element a = Element::basis(base, k);
    // q (a (x) 1 - 1 (x) a) q = qa (x) q - q (x) aq
    diffs.push_back(Tensor{{{q * a, q}, {-q, a * q}}});
  }
  std::vector<Element> gram;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gram.push_back(pairing(diffs[i], diffs[j]));
  return CdCForm(base, std::move(gram), 0.5);
}

CdCForm independent_copies_closed_form(const AlgebraPtr& base, const Element& p) {
  validate_weight(base, p, {});
  int d = base->dim();
  Element one = Element::identity(base);
  auto mu = [&](const Element& x) { return (p * x).tau(); };
  std::vector<Element> gram;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Element as = Element::basis(base, i).adjoint();
      Element b = Element::basis(base, j);
      Element g = one * mu(as * b) - b * mu(as) - as * mu(b) + as * b;
      gram.push_back((g * p) * 0.5);
    }
  return CdCForm(base, std::move(gram), 0.5);
}

StddevReport stddev_report(const AlgebraPtr& base, const Element& p, std::uint64_t seed,
                           int count, const Tolerances& tol) {
  StddevReport rep;
  ExtendedAlgebra ea = extend(base, p, tol);
  record(rep.extension, std::max(ea.pairing_residual, ea.cdc_residual), 1e-10,
         Witness{"pairing residual, CdC residual", {ea.pairing_residual, ea.cdc_residual}, {}});

  Laplacian schur = stddev_laplacian(ea, tol);
  Laplacian closed = stddev_closed_form(base, p, tol);
  CdCForm copies = independent_copies_cdc(base, p);
  EnergyForm e = energy_form(copies, false, tol);
  Laplacian via_cdc = laplacian(e, tol);
  rep.schur_vs_closed = (schur.matrix() - closed.matrix()).cwiseAbs().maxCoeff();
  rep.schur_vs_cdc = (schur.matrix() - via_cdc.matrix()).cwiseAbs().maxCoeff();
  rep.closed_vs_cdc = (closed.matrix() - via_cdc.matrix()).cwiseAbs().maxCoeff();
  record(rep.laplacian_routes,
         std::max({rep.schur_vs_closed, rep.schur_vs_cdc, rep.closed_vs_cdc}), tol.eq,
         Witness{"Schur/closed, Schur/CdC, closed/CdC",
                 {rep.schur_vs_closed, rep.schur_vs_cdc, rep.closed_vs_cdc}, {}});

  CdCForm closed_gamma = independent_copies_closed_form(base, p);
  CdCForm from_delta = gamma_delta(schur, tol);
  double g1 = copies.distance(closed_gamma);
  double g2 = copies.distance(from_delta);
  record(rep.gamma_routes, std::max(g1, g2), 1e-10,
         Witness{"copies vs closed form, copies vs Gamma_Delta", {g1, g2}, {}});

  rep.connected.evaluated = 1;
  rep.connected.passed = connectedness(ea.laplacian, tol);
  if (!rep.connected.passed) {
    rep.connected.violations = 1;
    rep.connected.witness =
        Witness{"kernel dimension of Delta_B", {double(ea.laplacian.kernel_dim)}, {}};
  }

  Rng rng(seed);
  std::vector<Element> samples{Element::identity(base)};
  for (int k = 0; k < base->dim(); ++k) samples.push_back(Element::basis(base, k));
  for (int k = 0; k < count; ++k) samples.push_back(random_element(base, rng));
  for (std::size_t t = 0; t < samples.size(); ++t) {
    double sd = stddev_seminorm(p, samples[t]);
    double le = e.seminorm(samples[t]);
    // Compare variances: square roots blow rounding up near zero.
    record(rep.seminorm, std::abs(sd * sd - le * le), tol.eq * std::max(1.0, sd * sd),
           Witness{"standard deviation vs L_E", {sd, le}, {static_cast<int>(t)}});
  }

  rep.markov = markov_suite(e, seed, count, {1, 2}, tol);
  rep.markov.name = "stddev_completely_markov";
  rep.leibniz = leibniz_suite(e, seed, count, tol);
  rep.leibniz.name = "stddev_leibniz";
  for (Check* c : {&rep.extension, &rep.laplacian_routes, &rep.gamma_routes, &rep.seminorm})
    if (c->passed) c->witness.reset();
  return rep;
}

}  // namespace nca
