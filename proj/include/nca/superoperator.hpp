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

#include "nca/algebra.hpp"

namespace nca {

// C-linear map on an algebra, stored as its matrix over the orthonormal basis.
class SuperOperator {
 public:
  SuperOperator() = default;
  SuperOperator(AlgebraPtr algebra, Matrix onb_matrix);

  // Matrix of a C-linear map, read off column by column on the basis.
  static SuperOperator from_map(const AlgebraPtr& algebra,
                                const std::function<Element(const Element&)>& f);
  static SuperOperator identity(const AlgebraPtr& algebra);
  static SuperOperator zero(const AlgebraPtr& algebra);

  const AlgebraPtr& algebra() const { return algebra_; }
  const Matrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  Element apply(const Element& a) const;
  Element operator()(const Element& a) const { return apply(a); }

  // c -> (N(c*))*, assembled element by element since * is conjugate-linear.
  SuperOperator sharp() const;
  // Hilbert-space adjoint for <.,.>_tau.
  SuperOperator adjoint() const;

  SuperOperator operator+(const SuperOperator& o) const;
  SuperOperator operator-(const SuperOperator& o) const;
  SuperOperator operator*(cplx s) const;
  // Composition: (A * B)(x) = A(B(x)).
  SuperOperator operator*(const SuperOperator& o) const;

  bool is_hermitian(double tol) const;

 private:
  void require_same(const SuperOperator& o) const;

  AlgebraPtr algebra_;
  Matrix matrix_;
};

SuperOperator left_multiplication(const Element& h);
SuperOperator right_multiplication(const Element& h);
// a -> [v, a]
SuperOperator inner_derivation(const Element& v);
// N_v(a) = [v*, [v, a]]
SuperOperator double_commutator(const Element& v);
// N_v(a) = -v* a v + (v* v a + a v* v) / 2
SuperOperator lindblad_generator(const Element& v);
// M_n(A) -> M_n(A), entrywise application of N.
SuperOperator amplify(const SuperOperator& n_op, int n);

}  // namespace nca
