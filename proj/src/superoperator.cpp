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

#include "nca/superoperator.hpp"

namespace nca {

SuperOperator::SuperOperator(AlgebraPtr algebra, Matrix onb_matrix)
    : algebra_(std::move(algebra)), matrix_(std::move(onb_matrix)) {
  if (matrix_.rows() != algebra_->dim() || matrix_.cols() != algebra_->dim())
    throw InputError("superoperator: matrix must be d x d for the algebra");
}

SuperOperator SuperOperator::from_map(
    const AlgebraPtr& algebra, const std::function<Element(const Element&)>& f) {
  int d = algebra->dim();
  Matrix m(d, d);
  for (int k = 0; k < d; ++k) {
    Element u = Element::basis(algebra, k) *
                (1.0 / std::sqrt(algebra->basis_weight(k)));
    m.col(k) = f(u).onb_coords();
  }
  return SuperOperator(algebra, m);
}

SuperOperator SuperOperator::identity(const AlgebraPtr& algebra) {
  return SuperOperator(algebra, Matrix::Identity(algebra->dim(), algebra->dim()));
}

SuperOperator SuperOperator::zero(const AlgebraPtr& algebra) {
  return SuperOperator(algebra, Matrix::Zero(algebra->dim(), algebra->dim()));
}

Element SuperOperator::apply(const Element& a) const {
  if (!same_algebra(algebra_, a.algebra()))
    throw InputError("superoperator: element belongs to a different algebra");
  return Element::from_onb(algebra_, matrix_ * a.onb_coords());
}

SuperOperator SuperOperator::sharp() const {
  return from_map(algebra_, [this](const Element& c) {
    return apply(c.adjoint()).adjoint();
  });
}

SuperOperator SuperOperator::adjoint() const {
  return SuperOperator(algebra_, matrix_.adjoint());
}

void SuperOperator::require_same(const SuperOperator& o) const {
  if (!same_algebra(algebra_, o.algebra_))
    throw InputError("superoperator: operands act on different algebras");
}

SuperOperator SuperOperator::operator+(const SuperOperator& o) const {
  require_same(o);
  return SuperOperator(algebra_, matrix_ + o.matrix_);
}

SuperOperator SuperOperator::operator-(const SuperOperator& o) const {
  require_same(o);
  return SuperOperator(algebra_, matrix_ - o.matrix_);
}

SuperOperator SuperOperator::operator*(cplx s) const {
  return SuperOperator(algebra_, matrix_ * s);
}

SuperOperator SuperOperator::operator*(const SuperOperator& o) const {
  require_same(o);
  return SuperOperator(algebra_, matrix_ * o.matrix_);
}

bool SuperOperator::is_hermitian(double tol) const {
  double scale = 1.0 + matrix_.cwiseAbs().maxCoeff();
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

SuperOperator left_multiplication(const Element& h) {
  return SuperOperator::from_map(h.algebra(),
                                 [&](const Element& a) { return h * a; });
}

SuperOperator right_multiplication(const Element& h) {
  return SuperOperator::from_map(h.algebra(),
                                 [&](const Element& a) { return a * h; });
}

SuperOperator inner_derivation(const Element& v) {
  return SuperOperator::from_map(v.algebra(),
                                 [&](const Element& a) { return commutator(v, a); });
}

SuperOperator double_commutator(const Element& v) {
  Element vs = v.adjoint();
  return SuperOperator::from_map(v.algebra(), [&](const Element& a) {
    return commutator(vs, commutator(v, a));
  });
}

SuperOperator lindblad_generator(const Element& v) {
  Element vs = v.adjoint();
  Element vsv = vs * v;
  return SuperOperator::from_map(v.algebra(), [&](const Element& a) {
    return -(vs * a * v) + 0.5 * (vsv * a + a * vsv);
  });
}

SuperOperator amplify(const SuperOperator& n_op, int n) {
  const AlgebraPtr& base = n_op.algebra();
  AlgebraPtr big = amplify(*base, n);
  return SuperOperator::from_map(big, [&](const Element& x) {
    auto entries = matrix_entries(x, base, n);
    for (auto& row : entries)
      for (auto& e : row) e = n_op(e);
    return assemble_matrix(big, entries);
  });
}

}  // namespace nca
