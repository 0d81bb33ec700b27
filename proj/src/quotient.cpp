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

#include "nca/quotient.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace nca {

namespace {

Matrix hermitian(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Matrix take(const Matrix& m, const std::vector<int>& rows,
            const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
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

void settle(Check& c) {
  if (c.passed) c.witness.reset();
}

}  // namespace

Element projection_from_blocks(const AlgebraPtr& algebra,
                               const std::vector<int>& keep_blocks) {
  Element p(algebra);
  for (int b : keep_blocks) {
    if (b < 0 || b >= algebra->num_blocks())
      throw InputError("projection: block index out of range");
    p.block(b) = Matrix::Identity(algebra->block_size(b), algebra->block_size(b));
  }
  return p;
}

Element central_support(const Element& a, double tol) {
  Element p(a.algebra());
  for (int b = 0; b < a.num_blocks(); ++b)
    if (a.block(b).cwiseAbs().maxCoeff() > tol)
      p.block(b) = Matrix::Identity(a.block(b).rows(), a.block(b).cols());
  return p;
}

QuotientData split(const Laplacian& lap, const Element& p, const Tolerances& tol) {
  const AlgebraPtr& alg = lap.algebra();
  if (!same_algebra(alg, p.algebra()))
    throw InputError("quotient: projection lives on a different algebra");
  const double ctol = 1e-10;
  int d = alg->dim();
  for (int k = 0; k < d; ++k)
    if (commutator(p, Element::basis(alg, k)).norm() > ctol)
      throw InputError("quotient: projection is not central");
  if (p.distance(p.adjoint()) > ctol || p.distance(p * p) > ctol)
    throw InputError("quotient: p is not a self-adjoint idempotent");

  QuotientData qd;
  qd.projection = p;
  qd.ambient = alg;
  std::vector<int> blocks;
  std::vector<double> weights;
  for (int b = 0; b < alg->num_blocks(); ++b)
    if (std::abs(p.block(b)(0, 0) - 1.0) < 0.5) {
      qd.kept_blocks.push_back(b);
      blocks.push_back(alg->block_size(b));
      weights.push_back(alg->weight(b));
    }
  if (qd.kept_blocks.empty() || static_cast<int>(qd.kept_blocks.size()) == alg->num_blocks())
    throw InputError("quotient: projection must be proper (p != 0, p != 1)");
  qd.sub = build_algebra(blocks, weights);
  for (int k = 0; k < d; ++k) {
    int blk = alg->basis_index(k).block;
    bool kept = std::find(qd.kept_blocks.begin(), qd.kept_blocks.end(), blk) !=
                qd.kept_blocks.end();
    (kept ? qd.b_index : qd.c_index).push_back(k);
  }

  const Matrix& m = lap.matrix();
  qd.r = take(m, qd.b_index, qd.b_index);
  qd.j = take(m, qd.c_index, qd.b_index);
  qd.s = take(m, qd.c_index, qd.c_index);
  qd.ambient_laplacian = lap;

  Eigen::SelfAdjointEigenSolver<Matrix> full(hermitian(m), Eigen::EigenvaluesOnly);
  double top = std::max(0.0, full.eigenvalues().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian(qd.s), Eigen::EigenvaluesOnly);
  if (top == 0.0 || es.eigenvalues().minCoeff() <= tol.rank * top)
    throw InputError(
        "quotient: S is singular (the removed summand carries a disconnected piece)");
  qd.quotient_laplacian = schur_quotient(qd, tol);
  return qd;
}

Laplacian schur_quotient(const QuotientData& qd, const Tolerances& tol) {
  Matrix jstar = take(qd.ambient_laplacian.matrix(), qd.b_index, qd.c_index);
  Matrix schur = qd.r - jstar * qd.s.ldlt().solve(qd.j);
  return make_laplacian(SuperOperator(qd.sub, schur), tol);
}

Element restrict_to_sub(const QuotientData& qd, const Element& a) {
  if (!same_algebra(a.algebra(), qd.ambient))
    throw InputError("quotient: element lives on a different algebra");
  std::vector<Matrix> blocks;
  for (int b : qd.kept_blocks) blocks.push_back(a.block(b));
  return Element(qd.sub, std::move(blocks));
}

Element lift(const QuotientData& qd, const Element& b, const Vector& c_onb) {
  if (!same_algebra(b.algebra(), qd.sub))
    throw InputError("quotient: element does not live on B");
  if (c_onb.size() != static_cast<int>(qd.c_index.size()))
    throw InputError("quotient: fiber coordinate has the wrong length");
  Vector bo = b.onb_coords();
  Vector v = Vector::Zero(qd.ambient->dim());
  for (std::size_t i = 0; i < qd.b_index.size(); ++i) v[qd.b_index[i]] = bo[i];
  for (std::size_t i = 0; i < qd.c_index.size(); ++i) v[qd.c_index[i]] = c_onb[i];
  return Element::from_onb(qd.ambient, v);
}

Element fiber_minimizer(const QuotientData& qd, const Element& b) {
  Vector c = -qd.s.ldlt().solve(qd.j * b.onb_coords());
  return lift(qd, b, c);
}

std::vector<Check> QuotientReport::checks() const {
  std::vector<Check> out{ambient,  infimum,        perturbation, connected,
                         reconstruction, markov, leibniz,      monotone};
  if (conductances) out.push_back(*conductances);
  return out;
}

bool QuotientReport::passed() const {
  for (const Check& c : checks())
    if (!c.passed) return false;
  return true;
}

QuotientReport quotient_checks(const QuotientData& qd, std::uint64_t seed,
                               int count, const Tolerances& tol) {
  QuotientReport rep;
  EnergyForm e = energy_form_from_laplacian(qd.ambient_laplacian);
  DirichletReconstruction amb = cdc_from_dirichlet_form(e, true, seed, tol);
  rep.ambient.evaluated = 1;
  if (!amb.ok()) {
    rep.ambient.passed = false;
    rep.ambient.violations = 1;
    std::string which;
    for (const Check& c : {amb.reality, amb.positivity, amb.markov, amb.trace_pairing})
      if (!c.passed) which += (which.empty() ? "" : ", ") + c.name;
    for (const Check& c : amb.cdc_report.checks())
      if (!c.passed) which += (which.empty() ? "" : ", ") + c.name;
    rep.ambient.witness = Witness{"ambient form fails: " + which, {}, {}};
    return rep;
  }

  EnergyForm eb = energy_form_from_laplacian(qd.quotient_laplacian);
  Rng rng(seed);
  double mag = std::max(1.0, qd.ambient_laplacian.matrix().cwiseAbs().maxCoeff());

  std::vector<Element> bs{Element::identity(qd.sub)};
  for (int k = 0; k < qd.sub->dim(); ++k) bs.push_back(Element::basis(qd.sub, k));
  for (int k = 0; k < count; ++k) bs.push_back(random_element(qd.sub, rng));
  int nc = static_cast<int>(qd.c_index.size());
  for (std::size_t t = 0; t < bs.size(); ++t) {
    const Element& b = bs[t];
    Element a = fiber_minimizer(qd, b);
    double eq = eb(b, b).real();
    double ea = e(a, a).real();
    double scale = mag * std::max(1.0, b.onb_coords().squaredNorm());
    record(rep.infimum, std::abs(ea - eq), tol.eq * scale,
           Witness{"E(lift, lift) vs <b, Delta^B b>", {ea, eq}, {static_cast<int>(t)}});

    // E(a + eps) - E(a) = <eps, S eps> > 0
    Vector eps(nc);
    for (int i = 0; i < nc; ++i) eps[i] = rng.complex_normal();
    Vector cmin = -qd.s.ldlt().solve(qd.j * b.onb_coords());
    Element pert = lift(qd, b, cmin + eps);
    double gain = e(pert, pert).real() - ea;
    double expect = eps.dot(qd.s * eps).real();
    double diff = std::abs(gain - expect);
    if (gain <= 0.0) diff = std::max(diff, -gain + 1.0);
    record(rep.perturbation, diff, tol.eq * scale * std::max(1.0, eps.squaredNorm()),
           Witness{"E(a + eps) - E(a) vs <eps, S eps>", {gain, expect},
                   {static_cast<int>(t)}});
  }
  settle(rep.infimum);
  settle(rep.perturbation);

  for (int k = 0; k < count; ++k) {
    Element a = random_element(qd.ambient, rng);
    double lb = eb.seminorm(restrict_to_sub(qd, a));
    double la = e.seminorm(a);
    record(rep.monotone, lb - la, tol.eq * std::max(1.0, la),
           Witness{"L_{E^B}(p a) > L_E(a)", {lb, la}, {k}});
  }
  settle(rep.monotone);

  rep.connected.evaluated = 1;
  if (connectedness(qd.ambient_laplacian, tol)) {
    rep.connected.passed = connectedness(qd.quotient_laplacian, tol);
    if (!rep.connected.passed) {
      rep.connected.violations = 1;
      rep.connected.witness =
          Witness{"kernel dimension of Delta^B", {double(qd.quotient_laplacian.kernel_dim)}, {}};
    }
  } else {
    rep.connected.value = false;
  }

  DirichletReconstruction rec = cdc_from_dirichlet_form(eb, true, seed, tol);
  rep.reconstruction.evaluated = 1;
  rep.reconstruction.passed = rec.ok();
  if (!rec.ok()) {
    rep.reconstruction.violations = 1;
    rep.reconstruction.witness = Witness{"Gamma_Delta of the quotient is not a CdC", {}, {}};
  }
  rep.markov = rec.markov;
  rep.markov.name = "quotient_completely_markov";
  rep.leibniz = leibniz_suite(eb, seed, count, tol);
  rep.leibniz.name = "quotient_leibniz";

  if (qd.sub->is_commutative()) {
    Check c("effective_conductances_nonnegative");
    const Matrix& g = eb.gram();
    for (int x = 0; x < g.rows(); ++x)
      for (int y = 0; y < g.cols(); ++y) {
        if (x == y) continue;
        double cond = -g(x, y).real();
        record(c, std::max(-cond, std::abs(g(x, y).imag())), 1e-10 * mag,
               Witness{"negative effective conductance", {cond}, {x, y}});
      }
    settle(c);
    rep.conductances = c;
  }
  return rep;
}

}  // namespace nca
