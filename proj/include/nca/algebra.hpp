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
#include <optional>
#include <string>
#include <vector>

#include "nca/common.hpp"

namespace nca {

// Direct sum of full matrix blocks M_{n_1} + ... + M_{n_k} with the faithful
// trace tau(a) = sum_i w_i tr(a_i).
//
// Canonical basis: matrix units e^{(i)}_{jk}, block-major then row-major.
// Orthonormal basis for <a,b> = tau(a* b): e^{(i)}_{jk} / sqrt(w_i).
class Algebra {
 public:
  struct BasisIndex {
    int block;
    int row;
    int col;
  };

  Algebra(std::vector<int> blocks, std::vector<double> trace_weights);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_size(int i) const { return blocks_[i]; }
  double weight(int i) const { return weights_[i]; }
  const std::vector<int>& blocks() const { return blocks_; }
  const std::vector<double>& weights() const { return weights_; }

  int dim() const { return dim_; }
  // Side length of the block-diagonal realization, sum_i n_i.
  int unit_size() const { return unit_size_; }
  // First basis index of block i.
  int offset(int i) const { return offsets_[i]; }
  // First row of block i inside the block-diagonal realization.
  int row_offset(int i) const { return row_offsets_[i]; }

  const BasisIndex& basis_index(int k) const { return index_[k]; }
  int basis_position(int block, int row, int col) const {
    return offsets_[block] + row * blocks_[block] + col;
  }
  double basis_weight(int k) const { return weights_[index_[k].block]; }

  // e_k* as a basis index.
  int adjoint_index(int k) const { return adjoint_[k]; }
  // e_i e_j is either zero or a single matrix unit.
  std::optional<int> product_index(int i, int j) const;
  bool is_diagonal_unit(int k) const {
    return index_[k].row == index_[k].col;
  }

  bool is_commutative() const;
  double tau_unit() const;  // tau(1) = sum_i w_i n_i

  bool operator==(const Algebra& other) const;
  bool operator!=(const Algebra& other) const { return !(*this == other); }

  std::string describe() const;

 private:
  std::vector<int> blocks_;
  std::vector<double> weights_;
  std::vector<int> offsets_;
  std::vector<int> row_offsets_;
  std::vector<BasisIndex> index_;
  std::vector<int> adjoint_;
  int dim_ = 0;
  int unit_size_ = 0;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

AlgebraPtr build_algebra(std::vector<int> blocks,
                         std::vector<double> trace_weights);
// C(X) on n points with counting measure.
AlgebraPtr counting_algebra(int n);
bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

class Element {
 public:
  Element() = default;
  explicit Element(AlgebraPtr algebra);
  Element(AlgebraPtr algebra, std::vector<Matrix> blocks);

  static Element zero(const AlgebraPtr& algebra);
  static Element identity(const AlgebraPtr& algebra);
  static Element basis(const AlgebraPtr& algebra, int k);
  static Element from_coords(const AlgebraPtr& algebra, const Vector& coords);
  static Element from_onb(const AlgebraPtr& algebra, const Vector& coords);
  // Commutative algebras only: the function x -> values[x].
  static Element function(const AlgebraPtr& algebra,
                          const std::vector<cplx>& values);
  static Element real_function(const AlgebraPtr& algebra,
                               const std::vector<double>& values);
  static Element delta(const AlgebraPtr& algebra, int x);

  const AlgebraPtr& algebra() const { return algebra_; }
  bool empty() const { return !algebra_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Matrix& block(int i) const { return blocks_[i]; }
  Matrix& block(int i) { return blocks_[i]; }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  // Coordinates over the canonical basis (matrix entries, block-major).
  Vector coords() const;
  // Coordinates over the orthonormal basis.
  Vector onb_coords() const;
  cplx coord(int k) const;
  // Commutative algebras only: values at the points.
  std::vector<cplx> values() const;
  std::vector<double> real_values() const;

  Element adjoint() const;
  cplx tau() const;
  double norm() const;  // operator norm
  bool is_self_adjoint(double tol) const;
  // Block-diagonal realization inside M_n, n = sum n_i.
  Matrix embed() const;

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(cplx s);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, cplx s) { return a *= s; }
  friend Element operator*(cplx s, Element a) { return a *= s; }
  friend Element operator*(Element a, double s) { return a *= cplx(s); }
  friend Element operator*(double s, Element a) { return a *= cplx(s); }
  friend Element operator-(Element a) { return a *= cplx(-1.0); }
  friend Element operator*(const Element& a, const Element& b);

  // Largest entrywise deviation, for tests and identity checks.
  double distance(const Element& other) const;

 private:
  void require_same(const Element& other, const char* op) const;

  AlgebraPtr algebra_;
  std::vector<Matrix> blocks_;
};

Element commutator(const Element& a, const Element& b);

cplx tau_inner(const Element& a, const Element& b);
bool is_positive(const Element& a, double tol = 1e-9);
double operator_norm(const Element& a);
// Eigenvalues of a self-adjoint element, ascending, with multiplicity.
std::vector<double> spectrum(const Element& a);

// Real piecewise-linear function: linear interpolation through the knots,
// extended by the given end slopes.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::string name, std::vector<double> xs,
                  std::vector<double> ys, double slope_left,
                  double slope_right);

  static PiecewiseLinear identity();
  static PiecewiseLinear affine(double slope, double intercept);
  static PiecewiseLinear positive_part();       // max(t, 0)
  static PiecewiseLinear clamp_above(double r);  // min(t, r)
  static PiecewiseLinear absolute();             // |t|

  double operator()(double t) const;
  // Largest |slope| over the pieces meeting [lo, hi].
  double lipschitz_on(double lo, double hi) const;
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<double> xs_;
  std::vector<double> ys_;
  double slope_left_;
  double slope_right_;
};

struct CalculusResult {
  Element value;
  double lipschitz = 0.0;  // Lip(F) on the hull of the spectrum
};

CalculusResult functional_calculus(const Element& a, const PiecewiseLinear& f,
                                   double tol = 1e-9);

// Trace-preserving conditional expectation from M_n onto the canonical
// block-diagonal copy of the algebra.
Element conditional_expectation(const Matrix& full, const AlgebraPtr& algebra);

// M_n(A) realized as the direct sum of blocks M_{n n_i} with the same weights,
// so that tau_n = tr_n (x) tau.
AlgebraPtr amplify(const Algebra& algebra, int n);
// entries[j][k] in A, assembled into M_n(A).
Element assemble_matrix(const AlgebraPtr& amplified,
                        const std::vector<std::vector<Element>>& entries);
// Inverse of assemble_matrix.
std::vector<std::vector<Element>> matrix_entries(const Element& big,
                                                 const AlgebraPtr& base, int n);
// Block-diagonal V + W in M_{m+n}(A).
Element direct_sum(const Element& v, int m, const Element& w, int n,
                   const AlgebraPtr& base);
// alpha V beta for scalar matrices alpha, beta in M_n.
Element scalar_sandwich(const Matrix& alpha, const Element& v,
                        const Matrix& beta, const AlgebraPtr& base, int n);

}  // namespace nca
