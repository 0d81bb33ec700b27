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

#include "nca/energy.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "nca/kernels.hpp"

namespace nca {

namespace {

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// tau(X e_m) for a matrix unit e_m = e^{(b)}_{rs}: w_b X_{sr}.
cplx tau_times_unit(const Element& x, int m) {
  const auto& alg = *x.algebra();
  const auto& idx = alg.basis_index(m);
  return alg.weight(idx.block) * x.block(idx.block)(idx.col, idx.row);
}

// tau(e_m X) = tau(X e_m)
cplx tau_unit_times(int m, const Element& x) { return tau_times_unit(x, m); }

}  // namespace

// ---------------------------------------------------------------- EnergyForm

EnergyForm::EnergyForm(AlgebraPtr algebra, Matrix gram,
                       std::optional<CdCForm> provenance)
    : algebra_(std::move(algebra)),
      gram_(std::move(gram)),
      provenance_(std::move(provenance)) {
  if (gram_.rows() != algebra_->dim() || gram_.cols() != algebra_->dim())
    throw InputError("energy form: Gram matrix must be d x d");
}

cplx EnergyForm::operator()(const Element& a, const Element& b) const {
  if (!same_algebra(a.algebra(), algebra_) || !same_algebra(b.algebra(), algebra_))
    throw InputError("energy form: arguments belong to a different algebra");
  return a.coords().dot(gram_ * b.coords());
}

double EnergyForm::seminorm(const Element& a) const {
  return std::sqrt(std::max(0.0, (*this)(a, a).real()));
}

Matrix EnergyForm::onb_gram() const {
  int d = algebra_->dim();
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m(i, j) = gram_(i, j) / std::sqrt(algebra_->basis_weight(i) *
                                        algebra_->basis_weight(j));
  return m;
}

EnergyForm energy_form(const CdCForm& gamma, bool force, const Tolerances& tol) {
  if (!force && !is_cdc(gamma, tol).is_cdc())
    throw InputError("energy_form: the form is not a CdC (pass force to override)");
  int d = gamma.dim();
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = gamma.gram(i, j).tau();
  return EnergyForm(gamma.algebra(), g, gamma);
}

EnergyForm energy_form_from_laplacian(const Laplacian& lap) {
  const AlgebraPtr& alg = lap.algebra();
  int d = alg->dim();
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      g(i, j) = lap.matrix()(i, j) *
                std::sqrt(alg->basis_weight(i) * alg->basis_weight(j));
  return EnergyForm(alg, g);
}

// ---------------------------------------------------------------- Laplacian

Laplacian make_laplacian(const SuperOperator& op, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(op.matrix()),
                                           Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double top = ev.size() ? std::max(0.0, ev(ev.size() - 1)) : 0.0;
  int kernel = 0;
  for (int k = 0; k < ev.size(); ++k)
    if (std::abs(ev(k)) <= tol.rank * top || top == 0.0) ++kernel;
  return Laplacian{op, kernel};
}

Laplacian laplacian(const EnergyForm& e, const Tolerances& tol) {
  return make_laplacian(SuperOperator(e.algebra(), e.onb_gram()), tol);
}

Laplacian natural_part(const Laplacian& lap, const Tolerances& tol) {
  return make_laplacian((lap.superop + lap.superop.sharp()) * cplx(0.5), tol);
}

CdCForm gamma_delta(const Laplacian& lap, const Tolerances& tol) {
  return gamma_from_generator(lap.superop, 0.5, tol.eq);
}

// ---------------------------------------------------------------- amplification

EnergyForm amplify_energy(const EnergyForm& e, int n) {
  if (n == 1) return e;
  const AlgebraPtr& base = e.algebra();
  AlgebraPtr big = amplify(*base, n);
  int bd = big->dim();
  std::vector<std::array<int, 3>> split(bd);
  for (int k = 0; k < bd; ++k) {
    const auto& idx = big->basis_index(k);
    int s = base->block_size(idx.block);
    split[k] = {idx.row / s, idx.col / s,
                base->basis_position(idx.block, idx.row % s, idx.col % s)};
  }
  Matrix g = Matrix::Zero(bd, bd);
  for (int k = 0; k < bd; ++k)
    for (int l = 0; l < bd; ++l)
      if (split[k][0] == split[l][0] && split[k][1] == split[l][1])
        g(k, l) = e.gram()(split[k][2], split[l][2]);
  return EnergyForm(big, g);
}

double energy_seminorm(const EnergyForm& e, const Element& a, int n) {
  if (n < 1) throw InputError("energy_seminorm: n must be >= 1");
  if (n == 1) return e.seminorm(a);
  auto entries = matrix_entries(a, e.algebra(), n);
  double s = 0.0;
  for (const auto& row : entries)
    for (const auto& x : row) s += e(x, x).real();
  return std::sqrt(std::max(0.0, s));
}

// ---------------------------------------------------------------- Markov

std::vector<BatteryItem> standard_battery(std::uint64_t seed) {
  Rng rng(seed ^ 0x5bd1e995ULL);
  std::vector<double> u = {rng.uniform(-1, 1), rng.uniform(-1, 1),
                           rng.uniform(-1, 1)};
  std::sort(u.begin(), u.end());
  std::vector<double> v = {rng.normal(), rng.normal(), rng.normal()};
  double left = rng.uniform(-2, 2), right = rng.uniform(-2, 2);
  std::vector<BatteryItem> b;
  b.push_back({"max(t,0)", [](const Element&) { return PiecewiseLinear::positive_part(); }});
  b.push_back({"min(t,|a|)", [](const Element& a) {
                 return PiecewiseLinear::clamp_above(a.norm());
               }});
  b.push_back({"|t|", [](const Element&) { return PiecewiseLinear::absolute(); }});
  b.push_back({"pl3", [u, v, left, right](const Element& a) {
                 double r = std::max(a.norm(), 1e-12);
                 std::vector<double> xs = {r * u[0], r * u[1], r * u[2]};
                 std::vector<double> ys = {r * v[0], r * v[1], r * v[2]};
                 // Guard against coincident knots after scaling.
                 for (int k = 1; k < 3; ++k)
                   if (!(xs[k] > xs[k - 1])) xs[k] = xs[k - 1] + 1e-9 * r;
                 return PiecewiseLinear("pl3", xs, ys, left, right);
               }});
  return b;
}

Check markov_check(const EnergyForm& e, const std::vector<BatteryItem>& battery,
                   const std::vector<Element>& samples, const Tolerances& tol) {
  Check c{"markov"};
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Element& a = samples[s];
    double la = e.seminorm(a);
    for (std::size_t f = 0; f < battery.size(); ++f) {
      PiecewiseLinear fn = battery[f].make(a);
      auto fa = functional_calculus(a, fn, tol.pos);
      double lhs = e.seminorm(fa.value);
      double rhs = fa.lipschitz * la;
      double excess = lhs - rhs;
      ++c.evaluated;
      if (excess > tol.eq * std::max(1.0, rhs)) {
        ++c.violations;
        if (excess > c.residual) {
          c.residual = excess;
          c.witness = Witness{"L(F(a)) > Lip(F) L(a) for F = " + battery[f].name +
                                  " (values: L(F(a)), Lip*L(a); indices: sample, F)",
                              {lhs, rhs},
                              {static_cast<int>(s), static_cast<int>(f)}};
        }
      }
    }
  }
  c.passed = c.violations == 0;
  return c;
}

std::vector<Element> markov_samples(const EnergyForm& e, int count, Rng& rng) {
  const AlgebraPtr& alg = e.algebra();
  std::vector<Element> out;
  for (int k = 0; k < count; ++k)
    out.push_back(random_self_adjoint(alg, rng) * rng.uniform(0.5, 3.0));
  std::vector<Element> units;
  for (int k = 0; k < alg->dim(); ++k)
    if (alg->is_diagonal_unit(k)) units.push_back(Element::basis(alg, k));
  for (std::size_t i = 0; i < units.size(); ++i)
    for (std::size_t j = 0; j < units.size(); ++j) {
      if (i == j) continue;
      double cross = e(units[i], units[j]).real();
      double self = e(units[j], units[j]).real();
      if (cross > 0.0 && self > 0.0) out.push_back(units[i] - units[j] * (cross / self));
    }
  return out;
}

Check markov_suite(const EnergyForm& e, std::uint64_t seed, int count,
                   const std::vector<int>& ns, const Tolerances& tol) {
  Rng rng(seed);
  auto battery = standard_battery(seed);
  Check total{"markov"};
  for (int n : ns) {
    EnergyForm en = amplify_energy(e, n);
    auto samples = markov_samples(en, count, rng);
    Check part = markov_check(en, battery, samples, tol);
    if (part.witness) part.witness->what += " at amplification " + std::to_string(n);
    merge_check(total, part);
  }
  return total;
}

// ---------------------------------------------------------------- Leibniz

Check leibniz_check(const EnergyForm& e,
                    const std::vector<std::pair<Element, Element>>& pairs,
                    const Tolerances& tol) {
  Check c{"leibniz"};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [a, b] = pairs[k];
    double lhs = e.seminorm(a * b);
    double rhs = e.seminorm(a) * b.norm() + a.norm() * e.seminorm(b);
    double excess = lhs - rhs;
    ++c.evaluated;
    if (excess > tol.eq * std::max(1.0, rhs)) {
      ++c.violations;
      if (excess > c.residual) {
        c.residual = excess;
        c.witness = Witness{"L(ab) > L(a)|b| + |a|L(b) (values: lhs, rhs; index: pair)",
                            {lhs, rhs},
                            {static_cast<int>(k)}};
      }
    }
  }
  c.passed = c.violations == 0;
  return c;
}

Check leibniz_suite(const EnergyForm& e, std::uint64_t seed, int count,
                    const Tolerances& tol) {
  const AlgebraPtr& alg = e.algebra();
  Rng rng(seed + 1);
  std::vector<std::pair<Element, Element>> pairs;
  Element one = Element::identity(alg);
  pairs.emplace_back(one, one);
  for (int k = 0; k < count; ++k)
    pairs.emplace_back(random_element(alg, rng), random_element(alg, rng));
  int d = alg->dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      pairs.emplace_back(Element::basis(alg, i), Element::basis(alg, j));
  return leibniz_check(e, pairs, tol);
}

// ---------------------------------------------------------------- matricial

Check matricial_check(const EnergyForm& e, int m, int n, std::uint64_t seed,
                      int count) {
  const AlgebraPtr& base = e.algebra();
  AlgebraPtr am = amplify(*base, m), an = amplify(*base, n);
  Rng rng(seed + 2);
  Check c{"matricial"};
  auto note = [&](double r, const std::string& what, int k) {
    ++c.evaluated;
    if (r > c.residual) {
      c.residual = r;
      c.witness = Witness{what, {r}, {m, n, k}};
    }
  };
  for (int k = 0; k < count; ++k) {
    Element v = random_element(am, rng), w = random_element(an, rng);
    double lv = energy_seminorm(e, v, m), lw = energy_seminorm(e, w, n);
    double lvw = energy_seminorm(e, direct_sum(v, m, w, n, base), m + n);
    double rhs = lv * lv + lw * lw;
    double rel = std::abs(lvw * lvw - rhs) / std::max(rhs, 1e-300);
    bool bad_sum = rel > 1e-12;
    note(bad_sum ? rel : 0.0, "direct-sum identity relative error", k);
    if (bad_sum) ++c.violations;

    Matrix alpha = random_matrix(n, n, rng), beta = random_matrix(n, n, rng);
    double na = Eigen::JacobiSVD<Matrix>(alpha).singularValues()(0);
    double nb = Eigen::JacobiSVD<Matrix>(beta).singularValues()(0);
    double lhs = energy_seminorm(e, scalar_sandwich(alpha, w, beta, base, n), n);
    double bound = na * lw * nb;
    double excess = lhs - bound;
    bool bad_bound = excess > 1e-9 * std::max(1.0, bound);
    note(bad_bound ? excess : 0.0, "bimodule bound excess", k);
    if (bad_bound) ++c.violations;
  }
  c.passed = c.violations == 0;
  if (c.passed) c.witness.reset();
  return c;
}

// ---------------------------------------------------------------- reality

double involution_defect(const SuperOperator& op) {
  const AlgebraPtr& alg = op.algebra();
  double m = 0.0;
  for (int k = 0; k < alg->dim(); ++k) {
    Element e = Element::basis(alg, k);
    m = std::max(m, op(e).adjoint().distance(op(e.adjoint())));
  }
  return m;
}

RealityReport reality_checks(const CdCForm& gamma, const Tolerances& tol) {
  const AlgebraPtr& alg = gamma.algebra();
  int d = alg->dim();
  Matrix t(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t(i, j) = gamma.gram(i, j).tau();
  double mag = std::max(1.0, t.cwiseAbs().maxCoeff());
  RealityReport rep;

  double real_res = 0.0;
  int wi = -1, wj = -1;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double r = std::abs(t(alg->adjoint_index(i), alg->adjoint_index(j)) - t(j, i));
      if (r > real_res) {
        real_res = r;
        wi = i;
        wj = j;
      }
    }
  bool real = real_res <= tol.eq * mag;

  auto best = kernels::triple_max(d, [&](int i, int j, int k) {
    cplx lhs = 0.0;
    if (auto ab = alg->product_index(i, j)) lhs = t(*ab, k);
    int is = alg->adjoint_index(i), js = alg->adjoint_index(j),
        ks = alg->adjoint_index(k);
    cplx rhs = tau_times_unit(gamma.gram(ks, js), is) +
               tau_unit_times(js, gamma.gram(i, k));
    return std::abs(lhs - rhs);
  });
  double bal_res = std::max(0.0, best.value);
  bool balanced = bal_res <= tol.eq * mag;

  // tau-real should match Delta commuting with the involution.
  EnergyForm e = energy_form(gamma, true, tol);
  Laplacian lap = laplacian(e, tol);
  double defect = involution_defect(lap.superop);
  double lap_mag = std::max(1.0, lap.matrix().cwiseAbs().maxCoeff());
  bool preserves = defect <= tol.eq * lap_mag;

  rep.tau_real.value = real;
  rep.tau_real.residual = real_res;
  rep.tau_real.evaluated = static_cast<std::size_t>(d) * d;
  rep.tau_real.passed = real == preserves;
  if (!real)
    rep.tau_real.witness =
        Witness{"tau(Gamma(a*, b*)) != tau(Gamma(b, a)) at basis pair; second "
                "value is the involution defect of Delta",
                {real_res, defect},
                {wi, wj}};

  rep.tau_balanced.value = balanced;
  rep.tau_balanced.residual = bal_res;
  rep.tau_balanced.evaluated = static_cast<std::size_t>(d) * d * d;
  rep.tau_balanced.passed = !(balanced && !real);
  if (!balanced)
    rep.tau_balanced.witness =
        Witness{"balance identity fails at basis triple (a, b, c)", {bal_res},
                {best.i, best.j, best.k}};
  return rep;
}

// ---------------------------------------------------------------- heat

double choi_min_eigenvalue(const SuperOperator& phi) {
  const AlgebraPtr& alg = phi.algebra();
  int n = alg->unit_size();
  Matrix choi = Matrix::Zero(n * n, n * n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      Matrix ers = Matrix::Zero(n, n);
      ers(r, s) = 1.0;
      Matrix img = phi(conditional_expectation(ers, alg)).embed();
      choi.block(r * n, s * n, n, n) = img;
    }
  double herm = (choi - choi.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(choi),
                                           Eigen::EigenvaluesOnly);
  return std::min(es.eigenvalues()(0), -herm);
}

HeatMap heat_map(const Laplacian& lap, double t, const Tolerances& tol) {
  if (!(t >= 0.0)) throw InputError("heat_map: t must be >= 0");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(lap.matrix()));
  Eigen::VectorXd decay = (-t * es.eigenvalues().array()).exp();
  Matrix m = es.eigenvectors() * decay.cast<cplx>().asDiagonal() *
             es.eigenvectors().adjoint();
  HeatMap h{SuperOperator(lap.algebra(), m)};
  Element one = Element::identity(lap.algebra());
  h.unital_residual = h.map(one).distance(one);
  h.unital = h.unital_residual <= tol.eq;
  h.choi_min_eigenvalue = choi_min_eigenvalue(h.map);
  h.cp = h.choi_min_eigenvalue >= -tol.pos;
  return h;
}

// ---------------------------------------------------------------- resolvent

Check resolvent_check(const SuperOperator& n_op, const std::vector<double>& ts,
                      std::uint64_t seed, int count, const Tolerances& tol) {
  Check c{"resolvent"};
  Rng rng(seed + 3);
  for (int level : {1, 2}) {
    SuperOperator op = level == 1 ? n_op : amplify(n_op, 2);
    const AlgebraPtr& alg = op.algebra();
    int d = alg->dim();
    std::vector<Element> pos;
    pos.push_back(Element::identity(alg));
    for (int k = 0; k < d; ++k)
      if (alg->is_diagonal_unit(k)) pos.push_back(Element::basis(alg, k));
    for (int k = 0; k < count; ++k) pos.push_back(random_positive(alg, rng));
    for (double t : ts) {
      if (!(t >= 0.0)) throw InputError("resolvent_check: t must be >= 0");
      Matrix a = Matrix::Identity(d, d) + t * op.matrix();
      Eigen::FullPivLU<Matrix> lu(a);
      if (!lu.isInvertible())
        throw std::logic_error("resolvent_check: I + tN is singular");
      SuperOperator r(alg, lu.inverse());
      Element one = Element::identity(alg);
      auto record = [&](double v, const std::string& what, int idx) {
        ++c.evaluated;
        if (v > tol.pos) ++c.violations;
        if (v > c.residual) {
          c.residual = v;
          c.witness = Witness{what + " (indices: amplification, sample; value: t)",
                              {t, v},
                              {level, idx}};
        }
      };
      record(r(one).distance(one), "R_t(1) != 1", -1);
      for (std::size_t k = 0; k < pos.size(); ++k) {
        Element ra = r(pos[k]);
        double scale = 1.0 + pos[k].norm();
        double herm = 0.0;
        for (int b = 0; b < ra.num_blocks(); ++b)
          herm = std::max(herm, (ra.block(b) - ra.block(b).adjoint()).cwiseAbs().maxCoeff());
        double neg = std::max(0.0, -spectrum(ra).front());
        record(std::max(herm, neg) / scale, "R_t(a) not positive", static_cast<int>(k));
        double grow = (ra.norm() - pos[k].norm()) / std::max(1.0, pos[k].norm());
        record(std::max(0.0, grow), "||R_t(a)|| > ||a||", static_cast<int>(k));
      }
    }
  }
  c.passed = c.violations == 0;
  if (c.passed) c.witness.reset();
  return c;
}

// ---------------------------------------------------------------- reconstruction

DirichletReconstruction cdc_from_dirichlet_form(const EnergyForm& e, bool checks,
                                                std::uint64_t seed,
                                                const Tolerances& tol) {
  const AlgebraPtr& alg = e.algebra();
  int d = alg->dim();
  const Matrix& g = e.gram();
  double mag = std::max(1.0, g.cwiseAbs().maxCoeff());
  DirichletReconstruction out;

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double r = std::abs(g(alg->adjoint_index(i), alg->adjoint_index(j)) - g(j, i));
      ++out.reality.evaluated;
      if (r > out.reality.residual) {
        out.reality.residual = r;
        out.reality.witness = Witness{"E(a*, b*) != E(b, a) at basis pair", {r}, {i, j}};
      }
    }
  out.reality.passed = out.reality.residual <= tol.eq * mag;
  if (out.reality.passed) out.reality.witness.reset();

  {
    Matrix onb = e.onb_gram();
    double herm = (onb - onb.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(onb),
                                             Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues()(0);
    double unit = 0.0;
    for (int j = 0; j < d; ++j) {
      cplx s = 0.0;
      for (int i = 0; i < d; ++i)
        if (alg->is_diagonal_unit(i)) s += g(i, j);
      unit = std::max(unit, std::abs(s));
    }
    out.positivity.evaluated = 1;
    out.positivity.residual = std::max({0.0, -lo, herm, unit});
    out.positivity.passed = out.positivity.residual <= tol.pos * mag;
    if (!out.positivity.passed)
      out.positivity.witness =
          Witness{"min eigenvalue, Hermitian defect, |E(1, .)|", {lo, herm, unit}, {}};
  }

  if (checks) {
    out.markov = markov_suite(e, seed, 20, {1, 2}, tol);
    out.markov.name = "completely_markov";
  }

  if (!out.reality.passed || !out.positivity.passed || !out.markov.passed)
    return out;

  CdCForm gamma = gamma_delta(laplacian(e, tol), tol);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double r = std::abs(gamma.gram(i, j).tau() - g(i, j));
      ++out.trace_pairing.evaluated;
      out.trace_pairing.residual = std::max(out.trace_pairing.residual, r);
    }
  out.trace_pairing.passed = out.trace_pairing.residual <= tol.eq * mag;
  out.cdc_report = is_cdc(gamma, tol);
  if (out.trace_pairing.passed && out.cdc_report.is_cdc()) out.cdc = gamma;
  return out;
}

bool connectedness(const Laplacian& lap, const Tolerances& tol) {
  const AlgebraPtr& alg = lap.algebra();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(lap.matrix()),
                                           Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double top = std::max(0.0, ev(ev.size() - 1));
  if (top == 0.0) return alg->dim() == 1;
  int kernel = 0;
  for (int k = 0; k < ev.size(); ++k)
    if (ev(k) <= tol.rank * top) ++kernel;
  if (kernel != 1) return false;
  Element one = Element::identity(alg);
  return lap(one).norm() <= tol.eq * (1.0 + top);
}

}  // namespace nca
