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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nca/cdc.hpp"
#include "nca/random.hpp"
#include "nca/superoperator.hpp"

namespace nca {

// E(a, b) = tau(Gamma(a, b)), stored as its Gram matrix over the canonical
// basis (conjugate-linear in the first slot).
class EnergyForm {
 public:
  EnergyForm() = default;
  EnergyForm(AlgebraPtr algebra, Matrix gram,
             std::optional<CdCForm> provenance = std::nullopt);

  const AlgebraPtr& algebra() const { return algebra_; }
  const Matrix& gram() const { return gram_; }
  const std::optional<CdCForm>& provenance() const { return provenance_; }

  cplx operator()(const Element& a, const Element& b) const;
  // L_E(a) = E(a, a)^{1/2}
  double seminorm(const Element& a) const;
  // Gram over the orthonormal basis; equals the Laplacian's matrix.
  Matrix onb_gram() const;

 private:
  AlgebraPtr algebra_;
  Matrix gram_;
  std::optional<CdCForm> provenance_;
};

// Laplace operator: <a, Delta b>_tau = E(a, b).
struct Laplacian {
  SuperOperator superop;
  int kernel_dim = 0;

  const AlgebraPtr& algebra() const { return superop.algebra(); }
  const Matrix& matrix() const { return superop.matrix(); }
  Element operator()(const Element& a) const { return superop(a); }
};

// Refuses forms that fail is_cdc unless force is set.
EnergyForm energy_form(const CdCForm& gamma, bool force = false,
                       const Tolerances& tol = {});
EnergyForm energy_form_from_laplacian(const Laplacian& lap);

Laplacian laplacian(const EnergyForm& e, const Tolerances& tol = {});
// Wraps a Hermitian PSD operator, counting its kernel.
Laplacian make_laplacian(const SuperOperator& op, const Tolerances& tol = {});
// (Delta + Delta^sharp) / 2
Laplacian natural_part(const Laplacian& lap, const Tolerances& tol = {});

// (1/2)(Delta(a*) b - Delta(a* b) + a* Delta(b))
CdCForm gamma_delta(const Laplacian& lap, const Tolerances& tol = {});

// E_n on M_n(A): E_n(A, B) = sum_jk E(a_jk, b_jk).
EnergyForm amplify_energy(const EnergyForm& e, int n);
// L_{E_n}(A) for A in M_n(A) (n = 1 takes A in the base algebra).
double energy_seminorm(const EnergyForm& e, const Element& a, int n);

// Markov battery entry: builds F from the sample it is applied to.
struct BatteryItem {
  std::string name;
  std::function<PiecewiseLinear(const Element&)> make;
};
// max(t,0), min(t,||a||), |t| and a seeded three-breakpoint function.
std::vector<BatteryItem> standard_battery(std::uint64_t seed);

// L(F(a)) <= Lip(F) L(a) on every (sample, F). Samples are self-adjoint
// elements of the form's algebra.
Check markov_check(const EnergyForm& e, const std::vector<BatteryItem>& battery,
                   const std::vector<Element>& samples,
                   const Tolerances& tol = {});
// Samples for a Markov test at one amplification level: seeded self-adjoint
// elements plus the projection-pair probes P - rQ (the construction behind
// the negative-conductance witness, generalized to orthogonal matrix units).
std::vector<Element> markov_samples(const EnergyForm& e, int count, Rng& rng);
// markov_check at each amplification level in ns.
Check markov_suite(const EnergyForm& e, std::uint64_t seed, int count = 20,
                   const std::vector<int>& ns = {1, 2},
                   const Tolerances& tol = {});

// L(ab) <= L(a)||b|| + ||a||L(b)
Check leibniz_check(const EnergyForm& e,
                    const std::vector<std::pair<Element, Element>>& pairs,
                    const Tolerances& tol = {});
Check leibniz_suite(const EnergyForm& e, std::uint64_t seed, int count = 20,
                    const Tolerances& tol = {});

// L_{E_{m+n}}(V+W)^2 = L_{E_m}(V)^2 + L_{E_n}(W)^2 and
// L_{E_n}(alpha V beta) <= ||alpha|| L_{E_n}(V) ||beta||.
Check matricial_check(const EnergyForm& e, int m, int n, std::uint64_t seed,
                      int count = 10);

struct RealityReport {
  Check tau_real{"tau_real"};
  Check tau_balanced{"tau_balanced"};
  bool real() const { return tau_real.value.value_or(false); }
  bool balanced() const { return tau_balanced.value.value_or(false); }
};
// tau(Gamma(a*, b*)) = tau(Gamma(b, a)) on basis pairs and
// tau(Gamma(ab, c)) = tau(Gamma(c*, b*) a*) + tau(b* Gamma(a, c)) on triples.
RealityReport reality_checks(const CdCForm& gamma, const Tolerances& tol = {});

// Largest deviation of (Delta a)* from Delta(a*) over the basis.
double involution_defect(const SuperOperator& op);

struct HeatMap {
  SuperOperator map;
  bool unital = false;
  bool cp = false;
  double unital_residual = 0.0;
  double choi_min_eigenvalue = 0.0;
};
// Phi_t = exp(-t Delta) by eigendecomposition, with unitality and complete
// positivity (Choi matrix of Phi_t composed with the conditional expectation).
HeatMap heat_map(const Laplacian& lap, double t, const Tolerances& tol = {});
// Minimum eigenvalue of the Choi matrix of phi o E on M_n.
double choi_min_eigenvalue(const SuperOperator& phi);

// R_t = (I + tN)^{-1}: positive, contractive on positives, unital; also at
// amplification 2.
Check resolvent_check(const SuperOperator& n_op, const std::vector<double>& ts,
                      std::uint64_t seed, int count = 10,
                      const Tolerances& tol = {});

struct DirichletReconstruction {
  std::optional<CdCForm> cdc;
  Check reality{"form_real"};
  Check positivity{"form_positive"};
  Check markov{"completely_markov"};
  Check trace_pairing{"trace_pairing"};
  CdCReport cdc_report;
  bool ok() const { return cdc.has_value(); }
};
// Gamma_Delta for the Laplacian of a real, positive, completely Markov form.
DirichletReconstruction cdc_from_dirichlet_form(const EnergyForm& e,
                                                bool checks = true,
                                                std::uint64_t seed = 0,
                                                const Tolerances& tol = {});

// Kernel of Delta is exactly the scalars.
bool connectedness(const Laplacian& lap, const Tolerances& tol = {});

}  // namespace nca
