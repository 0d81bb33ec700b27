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

#include <memory>
#include <vector>

#include "nca/cdc.hpp"
#include "nca/network.hpp"

namespace nca {

// L^2(Omega, tau) for a CdC Gamma: the kernel of m : A (x) A -> A with
// <a (x) b, c (x) d> = tau(b* Gamma(a, c) d), modulo its null vectors.
// Tensor coordinates use the canonical basis, index i * d + j for e_i (x) e_j.
struct BimoduleSpace {
  CdCForm gamma;
  int ambient_dim = 0;  // dim ker(m) = d^2 - d
  int rank = 0;         // r = dim L^2(Omega)
  Matrix kernel;        // d^2 x (d^2 - d), orthonormal columns spanning ker(m)
  Matrix gram;          // Gram matrix on those columns
  Matrix quotient;      // r x (d^2 - d): kernel coordinates -> orthonormal ones
  Matrix lift;          // (d^2 - d) x r, right inverse of quotient
  Matrix dmatrix;       // r x d: d u_j for the orthonormal basis u_j of L^2(A)
  std::vector<Matrix> left_action;   // per canonical basis element, r x r
  std::vector<Matrix> right_action;  // per canonical basis element, r x r
  double gram_min_eigenvalue = 0.0;
  double null_invariance_residual = 0.0;  // left and right actions
  double star_residual = 0.0;             // rho(a)* = rho(a*) on the basis

  const AlgebraPtr& algebra() const { return gamma.algebra(); }
  // Coordinates of d a = a (x) 1 - 1 (x) a in L^2(Omega).
  Vector differential(const Element& a) const;
  Matrix left(const Element& a) const;
  Matrix right(const Element& a) const;
};

// Refuses forms failing is_cdc unless force is set.
BimoduleSpace build_bimodule(const CdCForm& gamma, bool force = false,
                             const Tolerances& tol = {});

// D = [[0, d*], [d, 0]] on L^2(A) + L^2(Omega), orthonormal coordinates.
struct DiracOperator {
  std::shared_ptr<const BimoduleSpace> space;
  Matrix matrix;
  int base_dim = 0;
  int omega_dim = 0;

  // Left multiplication on L^2(A) plus the left action on L^2(Omega).
  Matrix pi(const Element& a) const;
  // +1 on L^2(A), -1 on L^2(Omega)
  Matrix grading() const;
};

DiracOperator dirac(const BimoduleSpace& bs);
DiracOperator dirac(BimoduleSpace&& bs);

// ||[D, pi(a)]||
double dirac_seminorm(const DiracOperator& d, const Element& a);
// max(||Gamma(a, a)||^{1/2}, ||Gamma(a*, a*)||^{1/2}), computed from Gamma.
double gamma_norm_formula(const CdCForm& gamma, const Element& a);

struct DiracReport {
  int dim_omega = 0;
  Check bimodule{"bimodule_descends"};
  Check factorization{"delta_factorization"};
  Check norm_formula{"norm_formula"};
  Check leibniz_identity{"leibniz_identity"};
  Check star_invariance{"seminorm_star_invariant"};
  std::vector<Check> checks() const {
    return {bimodule, factorization, norm_formula, leibniz_identity, star_invariance};
  }
};

// d*d = Delta against laplacian(energy_form(Gamma)), the norm formula on
// basis and seeded elements, and the Leibniz rule in coordinates.
DiracReport dirac_report(const DiracOperator& d, std::uint64_t seed = 0,
                         int count = 10, const Tolerances& tol = {});

struct StarGraphReport {
  bool is_star = false;
  bool parallelogram_holds = false;
  int center = -1;
  double max_defect = 0.0;
  std::optional<Witness> witness;
  bool agree() const { return is_star == parallelogram_holds; }
};

// Compares star shape with the parallelogram law for the squared Dirac
// seminorm of network_cdc(c, scale).
StarGraphReport star_graph_check(const ResistanceNetwork& net, double scale = 1.0,
                                 std::uint64_t seed = 0, int count = 20,
                                 const Tolerances& tol = {});

}  // namespace nca
