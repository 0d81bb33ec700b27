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

#include "nca/energy.hpp"

namespace nca {

// A = B + C along a central projection p, with B = pA and
//   Delta = [[R, J*], [J, S]]
// in orthonormal coordinates.
struct QuotientData {
  Element projection;
  AlgebraPtr ambient;
  AlgebraPtr sub;              // B, the blocks where p = 1
  std::vector<int> b_index;    // basis positions of B inside A
  std::vector<int> c_index;    // basis positions of C inside A
  std::vector<int> kept_blocks;
  Matrix r, j, s;
  Laplacian ambient_laplacian;
  Laplacian quotient_laplacian;  // R - J* S^{-1} J
};

// Central projection onto the listed blocks (node subsets for C(X)).
Element projection_from_blocks(const AlgebraPtr& algebra,
                               const std::vector<int>& keep_blocks);
// Central support of a: the identity on every block where a is nonzero, so the
// ideal generated by a is the range of the result.
Element central_support(const Element& a, double tol = 1e-10);

QuotientData split(const Laplacian& lap, const Element& p,
                   const Tolerances& tol = {});
// Delta^B = R - J* S^{-1} J, refilled into qd.quotient_laplacian by split.
Laplacian schur_quotient(const QuotientData& qd, const Tolerances& tol = {});

// Restriction p a as an element of B.
Element restrict_to_sub(const QuotientData& qd, const Element& a);
// b + (-S^{-1} J b): the lift of b with the least energy.
Element fiber_minimizer(const QuotientData& qd, const Element& b);
// b + c for c in C, as an element of A.
Element lift(const QuotientData& qd, const Element& b, const Vector& c_onb);

struct QuotientReport {
  Check ambient{"ambient_preconditions"};
  Check infimum{"quotient_equals_fiber_infimum"};
  Check perturbation{"lifts_exceed_minimum"};
  Check connected{"quotient_connected"};
  Check reconstruction{"quotient_is_cdc_energy_form"};
  Check markov{"quotient_completely_markov"};
  Check leibniz{"quotient_leibniz"};
  // L_{E^B}(p a) <= L_E(a)
  Check monotone{"quotient_seminorm_bound"};
  // Commutative B only: -Delta^B_xy >= 0 off the diagonal.
  std::optional<Check> conductances;
  std::vector<Check> checks() const;
  bool passed() const;
};

QuotientReport quotient_checks(const QuotientData& qd, std::uint64_t seed = 0,
                               int count = 10, const Tolerances& tol = {});

}  // namespace nca
