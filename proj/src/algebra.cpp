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

#include "nca/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace nca {

Algebra::Algebra(std::vector<int> blocks, std::vector<double> trace_weights)
    : blocks_(std::move(blocks)), weights_(std::move(trace_weights)) {
  if (blocks_.empty()) throw InputError("algebra: blocks must be nonempty");
  if (blocks_.size() != weights_.size()) {
    std::ostringstream os;
    os << "algebra: blocks has " << blocks_.size()
       << " entries but trace_weights has " << weights_.size();
    throw InputError(os.str());
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i] < 1) throw InputError("algebra: block sizes must be >= 1");
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw InputError("algebra: trace weights must be finite and > 0");
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    int n = blocks_[i];
    offsets_.push_back(dim_);
    row_offsets_.push_back(unit_size_);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        index_.push_back({static_cast<int>(i), r, c});
    dim_ += n * n;
    unit_size_ += n;
  }
  adjoint_.resize(dim_);
  for (int k = 0; k < dim_; ++k) {
    const auto& b = index_[k];
    adjoint_[k] = basis_position(b.block, b.col, b.row);
  }
}

std::optional<int> Algebra::product_index(int i, int j) const {
  const auto& a = index_[i];
  const auto& b = index_[j];
  if (a.block != b.block || a.col != b.row) return std::nullopt;
  return basis_position(a.block, a.row, b.col);
}

bool Algebra::is_commutative() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](int n) { return n == 1; });
}

double Algebra::tau_unit() const {
  double t = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) t += weights_[i] * blocks_[i];
  return t;
}

bool Algebra::operator==(const Algebra& other) const {
  return blocks_ == other.blocks_ && weights_ == other.weights_;
}

std::string Algebra::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) os << " + ";
    os << "M" << blocks_[i] << "(w=" << weights_[i] << ")";
  }
  return os.str();
}

AlgebraPtr build_algebra(std::vector<int> blocks,
                         std::vector<double> trace_weights) {
  return std::make_shared<const Algebra>(std::move(blocks),
                                         std::move(trace_weights));
}

AlgebraPtr counting_algebra(int n) {
  if (n < 1) throw InputError("counting_algebra: need at least one point");
  return build_algebra(std::vector<int>(n, 1), std::vector<double>(n, 1.0));
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------- Element

Element::Element(AlgebraPtr algebra) : algebra_(std::move(algebra)) {
  for (int n : algebra_->blocks()) blocks_.push_back(Matrix::Zero(n, n));
}

Element::Element(AlgebraPtr algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != algebra_->num_blocks())
    throw InputError("element: wrong number of blocks");
  for (int i = 0; i < algebra_->num_blocks(); ++i) {
    int n = algebra_->block_size(i);
    if (blocks_[i].rows() != n || blocks_[i].cols() != n)
      throw InputError("element: block shape does not match the algebra");
  }
}

Element Element::zero(const AlgebraPtr& algebra) { return Element(algebra); }

Element Element::identity(const AlgebraPtr& algebra) {
  Element e(algebra);
  for (auto& b : e.blocks_) b.setIdentity();
  return e;
}

Element Element::basis(const AlgebraPtr& algebra, int k) {
  Element e(algebra);
  const auto& idx = algebra->basis_index(k);
  e.blocks_[idx.block](idx.row, idx.col) = 1.0;
  return e;
}

Element Element::from_coords(const AlgebraPtr& algebra, const Vector& coords) {
  if (coords.size() != algebra->dim())
    throw InputError("element: coordinate vector has wrong length");
  Element e(algebra);
  for (int k = 0; k < algebra->dim(); ++k) {
    const auto& idx = algebra->basis_index(k);
    e.blocks_[idx.block](idx.row, idx.col) = coords[k];
  }
  return e;
}

Element Element::from_onb(const AlgebraPtr& algebra, const Vector& coords) {
  if (coords.size() != algebra->dim())
    throw InputError("element: coordinate vector has wrong length");
  Element e(algebra);
  for (int k = 0; k < algebra->dim(); ++k) {
    const auto& idx = algebra->basis_index(k);
    e.blocks_[idx.block](idx.row, idx.col) =
        coords[k] / std::sqrt(algebra->weight(idx.block));
  }
  return e;
}

Element Element::function(const AlgebraPtr& algebra,
                          const std::vector<cplx>& values) {
  if (!algebra->is_commutative())
    throw InputError("element: function values need a commutative algebra");
  if (static_cast<int>(values.size()) != algebra->dim())
    throw InputError("element: wrong number of function values");
  Element e(algebra);
  for (int x = 0; x < algebra->dim(); ++x) e.blocks_[x](0, 0) = values[x];
  return e;
}

Element Element::real_function(const AlgebraPtr& algebra,
                               const std::vector<double>& values) {
  return function(algebra, std::vector<cplx>(values.begin(), values.end()));
}

Element Element::delta(const AlgebraPtr& algebra, int x) {
  if (!algebra->is_commutative())
    throw InputError("element: point masses need a commutative algebra");
  if (x < 0 || x >= algebra->dim()) throw InputError("element: no such point");
  return basis(algebra, x);
}

Vector Element::coords() const {
  Vector v(algebra_->dim());
  for (int k = 0; k < algebra_->dim(); ++k) v[k] = coord(k);
  return v;
}

Vector Element::onb_coords() const {
  Vector v(algebra_->dim());
  for (int k = 0; k < algebra_->dim(); ++k)
    v[k] = coord(k) * std::sqrt(algebra_->basis_weight(k));
  return v;
}

cplx Element::coord(int k) const {
  const auto& idx = algebra_->basis_index(k);
  return blocks_[idx.block](idx.row, idx.col);
}

std::vector<cplx> Element::values() const {
  if (!algebra_->is_commutative())
    throw InputError("element: pointwise values need a commutative algebra");
  std::vector<cplx> v;
  for (const auto& b : blocks_) v.push_back(b(0, 0));
  return v;
}

std::vector<double> Element::real_values() const {
  std::vector<double> v;
  for (const auto& z : values()) v.push_back(z.real());
  return v;
}

Element Element::adjoint() const {
  Element e(algebra_);
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    e.blocks_[i] = blocks_[i].adjoint();
  return e;
}

cplx Element::tau() const {
  cplx t = 0.0;
  for (int i = 0; i < algebra_->num_blocks(); ++i)
    t += algebra_->weight(i) * blocks_[i].trace();
  return t;
}

double Element::norm() const {
  double m = 0.0;
  for (const auto& b : blocks_) {
    Eigen::JacobiSVD<Matrix> svd(b);
    m = std::max(m, svd.singularValues()(0));
  }
  return m;
}

bool Element::is_self_adjoint(double tol) const {
  double dev = 0.0;
  for (const auto& b : blocks_)
    dev = std::max(dev, (b - b.adjoint()).cwiseAbs().maxCoeff());
  return dev <= tol * (1.0 + norm());
}

Matrix Element::embed() const {
  int n = algebra_->unit_size();
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < algebra_->num_blocks(); ++i) {
    int s = algebra_->block_size(i);
    int o = algebra_->row_offset(i);
    m.block(o, o, s, s) = blocks_[i];
  }
  return m;
}

void Element::require_same(const Element& other, const char* op) const {
  if (!same_algebra(algebra_, other.algebra_))
    throw InputError(std::string("element ") + op +
                     ": operands belong to different algebras");
}

Element& Element::operator+=(const Element& other) {
  require_same(other, "add");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

Element& Element::operator-=(const Element& other) {
  require_same(other, "subtract");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

Element& Element::operator*=(cplx s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

Element operator*(const Element& a, const Element& b) {
  a.require_same(b, "multiply");
  Element c(a.algebra_);
  for (std::size_t i = 0; i < a.blocks_.size(); ++i)
    c.blocks_[i].noalias() = a.blocks_[i] * b.blocks_[i];
  return c;
}

double Element::distance(const Element& other) const {
  require_same(other, "compare");
  double d = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    d = std::max(d, (blocks_[i] - other.blocks_[i]).cwiseAbs().maxCoeff());
  return d;
}

Element commutator(const Element& a, const Element& b) { return a * b - b * a; }

cplx tau_inner(const Element& a, const Element& b) {
  if (!same_algebra(a.algebra(), b.algebra()))
    throw InputError("tau_inner: operands belong to different algebras");
  cplx s = 0.0;
  const auto& alg = *a.algebra();
  for (int i = 0; i < alg.num_blocks(); ++i)
    s += alg.weight(i) * (a.block(i).adjoint() * b.block(i)).trace();
  return s;
}

bool is_positive(const Element& a, double tol) {
  double scale = 1.0 + a.norm();
  for (int i = 0; i < a.num_blocks(); ++i) {
    const Matrix& b = a.block(i);
    if ((b - b.adjoint()).cwiseAbs().maxCoeff() > tol * scale) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (b + b.adjoint()),
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol * scale) return false;
  }
  return true;
}

double operator_norm(const Element& a) { return a.norm(); }

std::vector<double> spectrum(const Element& a) {
  std::vector<double> ev;
  for (int i = 0; i < a.num_blocks(); ++i) {
    const Matrix& b = a.block(i);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (b + b.adjoint()),
                                             Eigen::EigenvaluesOnly);
    for (int k = 0; k < es.eigenvalues().size(); ++k)
      ev.push_back(es.eigenvalues()(k));
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

// ---------------------------------------------------------------- PiecewiseLinear

PiecewiseLinear::PiecewiseLinear(std::string name, std::vector<double> xs,
                                 std::vector<double> ys, double slope_left,
                                 double slope_right)
    : name_(std::move(name)),
      xs_(std::move(xs)),
      ys_(std::move(ys)),
      slope_left_(slope_left),
      slope_right_(slope_right) {
  if (xs_.empty() || xs_.size() != ys_.size())
    throw InputError("piecewise-linear: need matching nonempty knot lists");
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i] > xs_[i - 1]))
      throw InputError("piecewise-linear: knots must be strictly increasing");
}

PiecewiseLinear PiecewiseLinear::identity() { return affine(1.0, 0.0); }

PiecewiseLinear PiecewiseLinear::affine(double slope, double intercept) {
  return PiecewiseLinear("affine", {0.0}, {intercept}, slope, slope);
}

PiecewiseLinear PiecewiseLinear::positive_part() {
  return PiecewiseLinear("max(t,0)", {0.0}, {0.0}, 0.0, 1.0);
}

PiecewiseLinear PiecewiseLinear::clamp_above(double r) {
  return PiecewiseLinear("min(t,r)", {r}, {r}, 1.0, 0.0);
}

PiecewiseLinear PiecewiseLinear::absolute() {
  return PiecewiseLinear("|t|", {0.0}, {0.0}, -1.0, 1.0);
}

double PiecewiseLinear::operator()(double t) const {
  if (t <= xs_.front()) return ys_.front() + slope_left_ * (t - xs_.front());
  if (t >= xs_.back()) return ys_.back() + slope_right_ * (t - xs_.back());
  auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - xs_.begin());
  double x0 = xs_[k - 1], x1 = xs_[k];
  double y0 = ys_[k - 1], y1 = ys_[k];
  return y0 + (y1 - y0) * (t - x0) / (x1 - x0);
}

double PiecewiseLinear::lipschitz_on(double lo, double hi) const {
  // Pieces: (-inf, x0], [x0, x1], ..., [x_last, inf).
  auto meets = [&](double a, double b) {
    if (lo < hi) return a < hi && b > lo;
    return a <= hi && b >= lo;
  };
  const double inf = std::numeric_limits<double>::infinity();
  double lip = 0.0;
  if (meets(-inf, xs_.front())) lip = std::max(lip, std::abs(slope_left_));
  for (std::size_t k = 1; k < xs_.size(); ++k)
    if (meets(xs_[k - 1], xs_[k]))
      lip = std::max(lip, std::abs((ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1])));
  if (meets(xs_.back(), inf)) lip = std::max(lip, std::abs(slope_right_));
  return lip;
}

CalculusResult functional_calculus(const Element& a, const PiecewiseLinear& f,
                                   double tol) {
  if (!a.is_self_adjoint(tol))
    throw InputError("functional_calculus: element is not self-adjoint");
  Element out(a.algebra());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < a.num_blocks(); ++i) {
    const Matrix& b = a.block(i);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (b + b.adjoint()));
    Vector fe(es.eigenvalues().size());
    for (int k = 0; k < fe.size(); ++k) {
      double lam = es.eigenvalues()(k);
      lo = std::min(lo, lam);
      hi = std::max(hi, lam);
      fe[k] = f(lam);
    }
    out.block(i) = es.eigenvectors() * fe.asDiagonal() * es.eigenvectors().adjoint();
  }
  return {out, f.lipschitz_on(lo, hi)};
}

Element conditional_expectation(const Matrix& full, const AlgebraPtr& algebra) {
  int n = algebra->unit_size();
  if (full.rows() != n || full.cols() != n)
    throw InputError("conditional_expectation: matrix size does not match the "
                     "block-diagonal realization");
  Element e(algebra);
  for (int i = 0; i < algebra->num_blocks(); ++i) {
    int s = algebra->block_size(i);
    int o = algebra->row_offset(i);
    e.block(i) = full.block(o, o, s, s);
  }
  return e;
}

// ---------------------------------------------------------------- amplification

AlgebraPtr amplify(const Algebra& algebra, int n) {
  if (n < 1) throw InputError("amplify: n must be >= 1");
  std::vector<int> blocks;
  for (int s : algebra.blocks()) blocks.push_back(n * s);
  return build_algebra(blocks, algebra.weights());
}

Element assemble_matrix(const AlgebraPtr& amplified,
                        const std::vector<std::vector<Element>>& entries) {
  int n = static_cast<int>(entries.size());
  Element big(amplified);
  for (int j = 0; j < n; ++j) {
    if (static_cast<int>(entries[j].size()) != n)
      throw InputError("assemble_matrix: entries must form a square array");
    for (int k = 0; k < n; ++k) {
      const Element& e = entries[j][k];
      if (e.num_blocks() != amplified->num_blocks())
        throw InputError("assemble_matrix: entry has the wrong block count");
      for (int i = 0; i < e.num_blocks(); ++i) {
        int s = e.algebra()->block_size(i);
        if (amplified->block_size(i) != n * s)
          throw InputError("assemble_matrix: amplified algebra mismatch");
        big.block(i).block(j * s, k * s, s, s) = e.block(i);
      }
    }
  }
  return big;
}

std::vector<std::vector<Element>> matrix_entries(const Element& big,
                                                 const AlgebraPtr& base, int n) {
  if (big.num_blocks() != base->num_blocks())
    throw InputError("matrix_entries: block count mismatch");
  for (int i = 0; i < base->num_blocks(); ++i)
    if (big.algebra()->block_size(i) != n * base->block_size(i))
      throw InputError("matrix_entries: element is not shaped for M_n(A)");
  std::vector<std::vector<Element>> out(n, std::vector<Element>(n, Element(base)));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < base->num_blocks(); ++i) {
        int s = base->block_size(i);
        out[j][k].block(i) = big.block(i).block(j * s, k * s, s, s);
      }
  return out;
}

Element direct_sum(const Element& v, int m, const Element& w, int n,
                   const AlgebraPtr& base) {
  auto ve = matrix_entries(v, base, m);
  auto we = matrix_entries(w, base, n);
  std::vector<std::vector<Element>> e(m + n,
                                      std::vector<Element>(m + n, Element(base)));
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) e[j][k] = ve[j][k];
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) e[m + j][m + k] = we[j][k];
  return assemble_matrix(amplify(*base, m + n), e);
}

Element scalar_sandwich(const Matrix& alpha, const Element& v,
                        const Matrix& beta, const AlgebraPtr& base, int n) {
  if (alpha.rows() != n || alpha.cols() != n || beta.rows() != n ||
      beta.cols() != n)
    throw InputError("scalar_sandwich: scalar matrices must be n x n");
  Element out(v.algebra());
  for (int i = 0; i < base->num_blocks(); ++i) {
    int s = base->block_size(i);
    Matrix a = Eigen::kroneckerProduct(alpha, Matrix::Identity(s, s));
    Matrix b = Eigen::kroneckerProduct(beta, Matrix::Identity(s, s));
    out.block(i) = a * v.block(i) * b;
  }
  return out;
}

}  // namespace nca
