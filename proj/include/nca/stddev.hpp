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

#include "nca/quotient.hpp"

namespace nca {

// B = A + C with the trace that gives the C unit weight 1, and the Laplacian
//   Delta_B(b, beta) = (p (b - beta), beta - mu(b)),   mu(a) = tau(p a),
// so that <(a, alpha), Delta_B (b, beta)> = mu((a - alpha)* (b - beta)).
struct ExtendedAlgebra {
  AlgebraPtr base;
  Element weight;  // p: central, strictly positive, tau(p) = 1
  AlgebraPtr extended;
  Laplacian laplacian;
  double pairing_residual = 0.0;  // displayed pairing on basis pairs
  double cdc_residual = 0.0;      // 2 Gamma_Delta against its closed form

  cplx mu(const Element& a) const { return (weight * a).tau(); }
  Element pack(const Element& a, cplx alpha) const;
};

ExtendedAlgebra extend(const AlgebraPtr& base, const Element& p,
                       const Tolerances& tol = {});

// Schur complement of the C block, moved back onto the base algebra.
Laplacian stddev_laplacian(const ExtendedAlgebra& ea, const Tolerances& tol = {});
// a -> p (a - mu(a))
Laplacian stddev_closed_form(const AlgebraPtr& base, const Element& p,
                             const Tolerances& tol = {});
// mu((a - mu(a))* (a - mu(a)))^{1/2}
double stddev_seminorm(const Element& p, const Element& a);

// Gamma(a, b) = <d a, d b> on A (x) A, with d a = q (a (x) 1 - 1 (x) a) q,
// q = p^{1/2}, and <x (x) y, z (x) w> = (1/2) tau(x* z) y* w.
CdCForm independent_copies_cdc(const AlgebraPtr& base, const Element& p);
// (1/2)(mu(a* b) - mu(a*) b - a* mu(b) + a* b) p
CdCForm independent_copies_closed_form(const AlgebraPtr& base, const Element& p);

struct StddevReport {
  Check extension{"extension_identities"};
  Check laplacian_routes{"laplacian_three_routes"};
  Check gamma_routes{"cdc_routes"};
  Check connected{"extension_connected"};
  Check seminorm{"seminorm_is_standard_deviation"};
  Check markov{"stddev_completely_markov"};
  Check leibniz{"stddev_leibniz"};
  // Pairwise residuals: Schur vs closed form, Schur vs CdC route, closed vs CdC.
  double schur_vs_closed = 0.0;
  double schur_vs_cdc = 0.0;
  double closed_vs_cdc = 0.0;
  std::vector<Check> checks() const {
    return {extension, laplacian_routes, gamma_routes, connected, seminorm, markov, leibniz};
  }
};

StddevReport stddev_report(const AlgebraPtr& base, const Element& p,
                           std::uint64_t seed = 0, int count = 10,
                           const Tolerances& tol = {});

}  // namespace nca
