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

#include <vector>

#include "nca/algebra.hpp"
#include "nca/superoperator.hpp"

namespace nca {

// Algebra-valued sesquilinear form Gamma, conjugate-linear in the first slot,
// stored by its values G[i][j] = Gamma(e_i, e_j) on the canonical basis.
// scale records the factor the form was built with (1 or 1/2 in practice).
class CdCForm {
 public:
  CdCForm() = default;
  CdCForm(AlgebraPtr algebra, std::vector<Element> gram, double scale);

  const AlgebraPtr& algebra() const { return algebra_; }
  int dim() const { return algebra_->dim(); }
  double scale() const { return scale_; }
  const Element& gram(int i, int j) const { return gram_[i * dim() + j]; }
  const std::vector<Element>& gram() const { return gram_; }

  Element operator()(const Element& a, const Element& b) const;

  // Largest entry over the whole Gram tensor; sets tolerance scales.
  double magnitude() const;
  double distance(const CdCForm& other) const;

 private:
  AlgebraPtr algebra_;
  std::vector<Element> gram_;
  double scale_ = 1.0;
};

struct CdCReport {
  Check symmetric{"symmetric"};
  Check unit_annihilating{"unit_annihilating"};
  Check star_representation{"star_representation"};
  Check completely_positive{"completely_positive"};

  bool is_cdc() const {
    return symmetric.passed && unit_annihilating.passed &&
           star_representation.passed && completely_positive.passed;
  }
  std::vector<Check> checks() const {
    return {symmetric, unit_annihilating, star_representation,
            completely_positive};
  }
};

// scale * (N(a*) b - N(a* b) + a* N(b))
CdCForm gamma_from_generator(const SuperOperator& n_op, double scale,
                             double tol = 1e-9);
// sum_j [v_j, a]* [v_j, b]
CdCForm commutator_cdc(const std::vector<Element>& vs);
// sum_x c_x (alpha_x(a) - a)* (alpha_x(b) - b)
CdCForm group_action_cdc(const std::vector<SuperOperator>& autos,
                         const std::vector<double>& weights,
                         double tol = 1e-9);
// E([D, a]* [D, b]) with E the conditional expectation onto the
// block-diagonal copy of the algebra inside M_n.
CdCForm spectral_triple_cdc(const Matrix& dirac, const AlgebraPtr& algebra,
                            double tol = 1e-9);
// Gamma(f, g)(y) = scale * sum_{x != y} conj(f(x) - f(y)) (g(x) - g(y)) c_xy.
// Negative conductances are refused unless allow_negative is set.
CdCForm network_cdc(const AlgebraPtr& algebra, const RealMatrix& c,
                    double scale, bool allow_negative = false);
CdCForm network_cdc(const RealMatrix& c, double scale,
                    bool allow_negative = false);
// c_py = Gamma(delta_p, delta_p)(y) / scale.
RealMatrix conductances_from_cdc(const CdCForm& gamma,
                                 const Tolerances& tol = {});

CdCReport is_cdc(const CdCForm& gamma, const Tolerances& tol = {});

// Conditional complete negativity of N, checked from its definition on the
// basis tuples (with the unit completion) and on seeded random tuples.
Check ccn_check(const SuperOperator& n_op, std::uint64_t seed = 0,
                int random_trials = 8, const Tolerances& tol = {});

// Gamma_n on M_n(A): (Gamma_n(A, B))_jk = sum_p Gamma(a_pj, b_pk).
CdCForm amplify_cdc(const CdCForm& gamma, int n);

}  // namespace nca
