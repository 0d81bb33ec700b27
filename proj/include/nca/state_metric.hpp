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

#include "nca/energy.hpp"

namespace nca {

// Tracial density: mu(a) = tau(rho a), rho >= 0, tau(rho) = 1.
class State {
 public:
  State() = default;
  static State from_density(const Element& rho, double tol = 1e-10);
  // Point evaluation on a commutative algebra: rho = delta_x / w_x.
  static State point(const AlgebraPtr& algebra, int x);
  // sum_k weights[k] states[k], weights a probability vector.
  static State mixture(const std::vector<State>& states,
                       const std::vector<double>& weights);

  const Element& density() const { return density_; }
  const AlgebraPtr& algebra() const { return density_.algebra(); }
  cplx operator()(const Element& a) const;

 private:
  explicit State(Element rho) : density_(std::move(rho)) {}
  Element density_;
};

// Delta restricted to the orthogonal complement of its kernel, for the
// closed-form metric.
class LaplacianSpectrum {
 public:
  explicit LaplacianSpectrum(const Laplacian& lap, const Tolerances& tol = {});

  bool connected() const { return connected_; }
  // Delta^+ lambda in orthonormal coordinates; throws DisconnectedError when
  // lambda has a component in ker(Delta).
  Vector pseudo_solve(const Vector& lambda_onb) const;
  // Coordinates of Delta^{+1/2} lambda over the positive eigenvectors: a
  // Euclidean image of (A~, E).
  Vector energy_coordinates(const Vector& lambda_onb) const;

 private:
  void require_range(const Vector& lambda_onb) const;

  Matrix vectors_;
  Eigen::VectorXd values_;
  std::vector<int> positive_;
  std::vector<int> kernel_;
  bool connected_ = false;
  double tol_eq_ = 1e-9;
};

// <mu - nu, Delta^+ (mu - nu)>_tau^{1/2}
double energy_metric(const Laplacian& lap, const State& mu, const State& nu,
                     const Tolerances& tol = {});
// L_E(h) for h the Riesz representative of mu - nu in (A~, E), solved from
// the energy Gram matrix on the trace-zero subspace.
double dual_metric(const EnergyForm& e, const State& mu, const State& nu,
                   const Tolerances& tol = {});

// sigma(mu) = h_{mu - base} as coordinates in the Hilbert space (A~, E).
class StateEmbedding {
 public:
  StateEmbedding(const Laplacian& lap, State base, const Tolerances& tol = {});
  Vector operator()(const State& mu) const;

 private:
  LaplacianSpectrum spectrum_;
  State base_;
};

Vector embed_state(const Laplacian& lap, const State& mu, const State& base,
                   const Tolerances& tol = {});

}  // namespace nca
