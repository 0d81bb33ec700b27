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

#include "nca/state_metric.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace nca {

State State::from_density(const Element& rho, double tol) {
  if (!is_positive(rho, tol)) throw InputError("state: density is not positive");
  if (std::abs(rho.tau() - 1.0) > tol)
    throw InputError("state: density must have tau(rho) = 1");
  return State(rho);
}

State State::point(const AlgebraPtr& algebra, int x) {
  Element d = Element::delta(algebra, x);
  return State(d * (1.0 / algebra->weight(x)));
}

State State::mixture(const std::vector<State>& states,
                     const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size())
    throw InputError("state mixture: need matching nonempty lists");
  Element rho(states.front().algebra());
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (weights[k] < 0.0) throw InputError("state mixture: negative weight");
    rho += states[k].density() * weights[k];
  }
  return from_density(rho);
}

cplx State::operator()(const Element& a) const { return (density_ * a).tau(); }

// ---------------------------------------------------------------- spectrum

LaplacianSpectrum::LaplacianSpectrum(const Laplacian& lap, const Tolerances& tol)
    : tol_eq_(tol.eq) {
  const Matrix& m = lap.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
  double top = std::max(0.0, values_(values_.size() - 1));
  for (int k = 0; k < values_.size(); ++k) {
    if (top > 0.0 && values_(k) > tol.rank * top)
      positive_.push_back(k);
    else
      kernel_.push_back(k);
  }
  connected_ = kernel_.size() == 1;
}

void LaplacianSpectrum::require_range(const Vector& lambda) const {
  double off = 0.0;
  for (int k : kernel_) off += std::norm(vectors_.col(k).dot(lambda));
  if (std::sqrt(off) > tol_eq_ * std::max(1.0, lambda.norm()))
    throw DisconnectedError(
        "disconnected: the state difference has a component in ker(Delta), "
        "so the distance is infinite");
}

Vector LaplacianSpectrum::pseudo_solve(const Vector& lambda) const {
  require_range(lambda);
  Vector h = Vector::Zero(lambda.size());
  for (int k : positive_)
    h += vectors_.col(k) * (vectors_.col(k).dot(lambda) / values_(k));
  return h;
}

Vector LaplacianSpectrum::energy_coordinates(const Vector& lambda) const {
  require_range(lambda);
  Vector y(positive_.size());
  for (std::size_t i = 0; i < positive_.size(); ++i) {
    int k = positive_[i];
    y[i] = vectors_.col(k).dot(lambda) / std::sqrt(values_(k));
  }
  return y;
}

// ---------------------------------------------------------------- metrics

static void require_compatible(const AlgebraPtr& alg, const State& mu,
                               const State& nu) {
  if (!same_algebra(alg, mu.algebra()) || !same_algebra(alg, nu.algebra()))
    throw InputError("metric: states live on a different algebra");
}

double energy_metric(const Laplacian& lap, const State& mu, const State& nu,
                     const Tolerances& tol) {
  require_compatible(lap.algebra(), mu, nu);
  Vector lambda = (mu.density() - nu.density()).onb_coords();
  LaplacianSpectrum sp(lap, tol);
  Vector h = sp.pseudo_solve(lambda);
  return std::sqrt(std::max(0.0, lambda.dot(h).real()));
}

double dual_metric(const EnergyForm& e, const State& mu, const State& nu,
                   const Tolerances& tol) {
  const AlgebraPtr& alg = e.algebra();
  require_compatible(alg, mu, nu);
  int d = alg->dim();
  Element lambda = mu.density() - nu.density();

  // Trace-zero subspace: off-diagonal units, and diagonal units balanced
  // against the first diagonal unit.
  int first_diag = 0;
  std::vector<Vector> basis;
  for (int k = 0; k < d; ++k) {
    if (k == first_diag) continue;
    Vector f = Vector::Zero(d);
    f[k] = 1.0;
    if (alg->is_diagonal_unit(k))
      f[first_diag] = -alg->basis_weight(k) / alg->basis_weight(first_diag);
    basis.push_back(f);
  }
  int m = static_cast<int>(basis.size());
  if (m == 0) return 0.0;
  Matrix f(d, m);
  for (int k = 0; k < m; ++k) f.col(k) = basis[k];
  Matrix g = f.adjoint() * e.gram() * f;
  g = 0.5 * (g + g.adjoint());

  // E(h, f_l) = <lambda, f_l>_tau  <=>  g x = conj(r)
  Vector rhs(m);
  for (int l = 0; l < m; ++l)
    rhs[l] = std::conj(tau_inner(lambda, Element::from_coords(alg, f.col(l))));

  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  double top = std::max(0.0, es.eigenvalues()(m - 1));
  Vector x = Vector::Zero(m);
  double off = 0.0;
  for (int k = 0; k < m; ++k) {
    cplx c = es.eigenvectors().col(k).dot(rhs);
    if (top > 0.0 && es.eigenvalues()(k) > tol.rank * top)
      x += es.eigenvectors().col(k) * (c / es.eigenvalues()(k));
    else
      off += std::norm(c);
  }
  if (std::sqrt(off) > tol.eq * std::max(1.0, rhs.norm()))
    throw DisconnectedError(
        "disconnected: no finite-energy function separates the two states");
  return std::sqrt(std::max(0.0, x.dot(g * x).real()));
}

StateEmbedding::StateEmbedding(const Laplacian& lap, State base,
                               const Tolerances& tol)
    : spectrum_(lap, tol), base_(std::move(base)) {
  if (!same_algebra(lap.algebra(), base_.algebra()))
    throw InputError("embedding: base state lives on a different algebra");
}

Vector StateEmbedding::operator()(const State& mu) const {
  if (!same_algebra(mu.algebra(), base_.algebra()))
    throw InputError("embedding: state lives on a different algebra");
  return spectrum_.energy_coordinates((mu.density() - base_.density()).onb_coords());
}

Vector embed_state(const Laplacian& lap, const State& mu, const State& base,
                   const Tolerances& tol) {
  return StateEmbedding(lap, base, tol)(mu);
}

}  // namespace nca
