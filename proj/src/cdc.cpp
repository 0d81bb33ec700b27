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

#include "nca/cdc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nca/kernels.hpp"
#include "nca/random.hpp"

namespace nca {

CdCForm::CdCForm(AlgebraPtr algebra, std::vector<Element> gram, double scale)
    : algebra_(std::move(algebra)), gram_(std::move(gram)), scale_(scale) {
  int d = algebra_->dim();
  if (static_cast<int>(gram_.size()) != d * d)
    throw InputError("cdc: Gram tensor must have d*d entries");
  for (const auto& g : gram_)
    if (!same_algebra(g.algebra(), algebra_))
      throw InputError("cdc: Gram entry belongs to a different algebra");
}

Element CdCForm::operator()(const Element& a, const Element& b) const {
  if (!same_algebra(a.algebra(), algebra_) || !same_algebra(b.algebra(), algebra_))
    throw InputError("cdc: arguments belong to a different algebra");
  int d = dim();
  Vector ac = a.coords();
  Vector bc = b.coords();
  Element out(algebra_);
  for (int i = 0; i < d; ++i) {
    if (ac[i] == cplx(0.0)) continue;
    cplx ai = std::conj(ac[i]);
    for (int j = 0; j < d; ++j) {
      if (bc[j] == cplx(0.0)) continue;
      out += gram(i, j) * (ai * bc[j]);
    }
  }
  return out;
}

double CdCForm::magnitude() const {
  double m = 0.0;
  for (const auto& g : gram_)
    for (const auto& b : g.blocks())
      if (b.size()) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

double CdCForm::distance(const CdCForm& other) const {
  if (!same_algebra(algebra_, other.algebra_))
    throw InputError("cdc: forms live on different algebras");
  double m = 0.0;
  for (std::size_t k = 0; k < gram_.size(); ++k)
    m = std::max(m, gram_[k].distance(other.gram_[k]));
  return m;
}

// ---------------------------------------------------------------- builders

CdCForm gamma_from_generator(const SuperOperator& n_op, double scale,
                             double tol) {
  const AlgebraPtr& alg = n_op.algebra();
  int d = alg->dim();
  Element n1 = n_op(Element::identity(alg));
  double op_scale = 1.0 + n_op.matrix().cwiseAbs().maxCoeff();
  if (n1.norm() > tol * op_scale)
    throw InputError("gamma_from_generator: N(1) is not zero");

  std::vector<Element> basis, n_basis;
  for (int k = 0; k < d; ++k) {
    basis.push_back(Element::basis(alg, k));
    n_basis.push_back(n_op(basis.back()));
  }
  auto gram = kernels::pair_table(d, [&](int i, int j) {
    int is = alg->adjoint_index(i);
    // N(e_i*) e_j + e_i* N(e_j) - N(e_i* e_j)
    Element g = n_basis[is] * basis[j] + basis[is] * n_basis[j];
    if (auto m = alg->product_index(is, j)) g -= n_basis[*m];
    return g * scale;
  });
  return CdCForm(alg, std::move(gram), scale);
}

CdCForm commutator_cdc(const std::vector<Element>& vs) {
  if (vs.empty()) throw InputError("commutator_cdc: need at least one element");
  const AlgebraPtr& alg = vs.front().algebra();
  for (const auto& v : vs)
    if (!same_algebra(v.algebra(), alg))
      throw InputError("commutator_cdc: elements belong to different algebras");
  int d = alg->dim();
  // derivs[v][k] = [v, e_k]
  std::vector<std::vector<Element>> derivs;
  for (const auto& v : vs) {
    std::vector<Element> row;
    for (int k = 0; k < d; ++k) row.push_back(commutator(v, Element::basis(alg, k)));
    derivs.push_back(std::move(row));
  }
  auto gram = kernels::pair_table(d, [&](int i, int j) {
    Element g(alg);
    for (const auto& row : derivs) g += row[i].adjoint() * row[j];
    return g;
  });
  return CdCForm(alg, std::move(gram), 1.0);
}

namespace {

bool is_identity_map(const SuperOperator& a) {
  Matrix id = Matrix::Identity(a.dim(), a.dim());
  return (a.matrix() - id).cwiseAbs().maxCoeff() <= 1e-12;
}

void validate_automorphism(const SuperOperator& alpha, int which, double tol) {
  const AlgebraPtr& alg = alpha.algebra();
  int d = alg->dim();
  std::ostringstream where;
  where << "group_action_cdc: map " << which;
  Element one = Element::identity(alg);
  if (alpha(one).distance(one) > tol)
    throw InputError(where.str() + " is not unital");
  std::vector<Element> basis, images;
  for (int k = 0; k < d; ++k) {
    basis.push_back(Element::basis(alg, k));
    images.push_back(alpha(basis.back()));
  }
  for (int i = 0; i < d; ++i) {
    if (alpha(basis[i].adjoint()).distance(images[i].adjoint()) > tol)
      throw InputError(where.str() + " does not preserve the involution");
    for (int j = 0; j < d; ++j) {
      Element lhs = alpha(basis[i] * basis[j]);
      if (lhs.distance(images[i] * images[j]) > tol)
        throw InputError(where.str() + " is not multiplicative");
    }
  }
  Eigen::JacobiSVD<Matrix> svd(alpha.matrix());
  if (svd.singularValues()(d - 1) < tol)
    throw InputError(where.str() + " is not invertible");
}

}  // namespace

CdCForm group_action_cdc(const std::vector<SuperOperator>& autos,
                         const std::vector<double>& weights, double tol) {
  if (autos.empty()) throw InputError("group_action_cdc: no automorphisms given");
  if (autos.size() != weights.size())
    throw InputError("group_action_cdc: autos and weights differ in length");
  const AlgebraPtr& alg = autos.front().algebra();
  int d = alg->dim();
  // diffs[x][k] = alpha_x(e_k) - e_k, for the non-identity maps only.
  std::vector<std::vector<Element>> diffs;
  std::vector<double> used;
  for (std::size_t x = 0; x < autos.size(); ++x) {
    if (!same_algebra(autos[x].algebra(), alg))
      throw InputError("group_action_cdc: maps act on different algebras");
    if (is_identity_map(autos[x])) continue;
    if (!(weights[x] >= 0.0))
      throw InputError("group_action_cdc: weights must be nonnegative");
    validate_automorphism(autos[x], static_cast<int>(x), tol);
    std::vector<Element> row;
    for (int k = 0; k < d; ++k) {
      Element e = Element::basis(alg, k);
      row.push_back(autos[x](e) - e);
    }
    diffs.push_back(std::move(row));
    used.push_back(weights[x]);
  }
  auto gram = kernels::pair_table(d, [&](int i, int j) {
    Element g(alg);
    for (std::size_t x = 0; x < diffs.size(); ++x)
      g += (diffs[x][i].adjoint() * diffs[x][j]) * used[x];
    return g;
  });
  return CdCForm(alg, std::move(gram), 1.0);
}

CdCForm spectral_triple_cdc(const Matrix& dirac, const AlgebraPtr& algebra,
                            double tol) {
  int n = algebra->unit_size();
  if (dirac.rows() != n || dirac.cols() != n)
    throw InputError("spectral_triple_cdc: D must act on C^n with n = sum n_i");
  double scale = 1.0 + dirac.cwiseAbs().maxCoeff();
  if ((dirac - dirac.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
    throw InputError("spectral_triple_cdc: D is not Hermitian");
  int d = algebra->dim();
  std::vector<Matrix> comm;
  for (int k = 0; k < d; ++k) {
    Matrix e = Element::basis(algebra, k).embed();
    comm.push_back(dirac * e - e * dirac);
  }
  auto gram = kernels::pair_table(d, [&](int i, int j) {
    return conditional_expectation(comm[i].adjoint() * comm[j], algebra);
  });
  return CdCForm(algebra, std::move(gram), 1.0);
}

CdCForm network_cdc(const AlgebraPtr& algebra, const RealMatrix& c,
                    double scale, bool allow_negative) {
  if (!algebra->is_commutative())
    throw InputError("network_cdc: the algebra must be commutative");
  int n = algebra->dim();
  if (c.rows() != n || c.cols() != n)
    throw InputError("network_cdc: conductance matrix must be n x n");
  for (int x = 0; x < n; ++x) {
    if (std::abs(c(x, x)) > 0.0)
      throw InputError("network_cdc: conductance diagonal must be zero");
    for (int y = 0; y < n; ++y)
      if (!std::isfinite(c(x, y)))
        throw InputError("network_cdc: conductances must be finite");
      else if (c(x, y) < 0.0 && !allow_negative)
        throw InputError("network_cdc: negative conductance");
  }
  auto gram = kernels::pair_table(n, [&](int i, int j) {
    std::vector<cplx> vals(n, 0.0);
    for (int y = 0; y < n; ++y) {
      double s = 0.0;
      for (int x = 0; x < n; ++x) {
        if (x == y) continue;
        double di = (x == i) - (y == i);
        double dj = (x == j) - (y == j);
        s += di * dj * c(x, y);
      }
      vals[y] = scale * s;
    }
    return Element::function(algebra, vals);
  });
  return CdCForm(algebra, std::move(gram), scale);
}

CdCForm network_cdc(const RealMatrix& c, double scale, bool allow_negative) {
  return network_cdc(counting_algebra(static_cast<int>(c.rows())), c, scale,
                     allow_negative);
}

RealMatrix conductances_from_cdc(const CdCForm& gamma, const Tolerances& tol) {
  const AlgebraPtr& alg = gamma.algebra();
  if (!alg->is_commutative())
    throw InputError("conductances_from_cdc: the algebra must be commutative");
  if (!is_cdc(gamma, tol).is_cdc())
    throw InputError("conductances_from_cdc: the form is not a CdC");
  int n = alg->dim();
  RealMatrix c = RealMatrix::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    const Element& g = gamma.gram(p, p);
    for (int y = 0; y < n; ++y)
      if (y != p) c(p, y) = g.block(y)(0, 0).real() / gamma.scale();
  }
  return c;
}

// ---------------------------------------------------------------- checks

CdCReport is_cdc(const CdCForm& gamma, const Tolerances& tol) {
  const AlgebraPtr& alg = gamma.algebra();
  int d = alg->dim();
  double mag = std::max(1.0, gamma.magnitude());
  CdCReport rep;

  std::vector<Element> basis;
  for (int k = 0; k < d; ++k) basis.push_back(Element::basis(alg, k));

  // Gamma(e_j, e_i) = Gamma(e_i, e_j)*
  {
    Check& c = rep.symmetric;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        double r = gamma.gram(j, i).distance(gamma.gram(i, j).adjoint());
        ++c.evaluated;
        if (r > c.residual) {
          c.residual = r;
          if (r > tol.eq * mag) c.witness = Witness{"basis pair (i, j)", {r}, {i, j}};
        }
      }
    c.passed = c.residual <= tol.eq * mag;
    if (c.passed) c.witness.reset();
  }

  // Gamma(1, e_j) = sum over diagonal units
  {
    Check& c = rep.unit_annihilating;
    for (int j = 0; j < d; ++j) {
      Element s(alg);
      for (int i = 0; i < d; ++i)
        if (alg->is_diagonal_unit(i)) s += gamma.gram(i, j);
      double r = s.norm();
      ++c.evaluated;
      if (r > c.residual) {
        c.residual = r;
        c.witness = Witness{"Gamma(1, e_j) != 0 at basis index j", {r}, {j}};
      }
    }
    c.passed = c.residual <= tol.eq * mag;
    if (c.passed) c.witness.reset();
  }

  // Gamma(ab, c) - Gamma(b, a* c) = b* Gamma(a, c) - Gamma(b, a*) c
  {
    Check& c = rep.star_representation;
    auto residual = [&](int i, int j, int k) {
      int is = alg->adjoint_index(i);
      int js = alg->adjoint_index(j);
      Element lhs(alg);
      if (auto ab = alg->product_index(i, j)) lhs += gamma.gram(*ab, k);
      if (auto asc = alg->product_index(is, k)) lhs -= gamma.gram(j, *asc);
      Element rhs = basis[js] * gamma.gram(i, k) - gamma.gram(j, is) * basis[k];
      return lhs.distance(rhs);
    };
    auto best = kernels::triple_max(d, residual);
    c.evaluated = static_cast<std::size_t>(d) * d * d;
    c.residual = std::max(0.0, best.value);
    c.passed = c.residual <= tol.eq * mag;
    if (!c.passed)
      c.witness = Witness{"basis triple (a, b, c)", {c.residual},
                          {best.i, best.j, best.k}};
  }

  // Positivity of [Gamma(e_i, e_j)] in M_d(A), one Hermitian matrix per block.
  {
    Check& c = rep.completely_positive;
    double min_eig = 0.0;
    for (int blk = 0; blk < alg->num_blocks(); ++blk) {
      int n = alg->block_size(blk);
      Matrix h(d * n, d * n);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          h.block(i * n, j * n, n, n) = gamma.gram(i, j).block(blk);
      Matrix hs = 0.5 * (h + h.adjoint());
      Eigen::SelfAdjointEigenSolver<Matrix> es(hs);
      double lo = es.eigenvalues()(0);
      ++c.evaluated;
      if (lo < min_eig) {
        min_eig = lo;
        Witness w{"negative eigenvector of the block Gram matrix (block, value, "
                  "then |coefficients|)",
                  {lo},
                  {blk}};
        for (int t = 0; t < es.eigenvectors().rows(); ++t)
          w.values.push_back(std::abs(es.eigenvectors()(t, 0)));
        c.witness = w;
      }
    }
    c.residual = std::max(0.0, -min_eig);
    c.passed = c.residual <= tol.pos * mag;
    if (c.passed) c.witness.reset();
  }
  return rep;
}

Check ccn_check(const SuperOperator& n_op, std::uint64_t seed,
                int random_trials, const Tolerances& tol) {
  const AlgebraPtr& alg = n_op.algebra();
  int d = alg->dim();
  Element one = Element::identity(alg);
  double op_scale = 1.0 + n_op.matrix().cwiseAbs().maxCoeff();
  if (n_op(one).norm() > tol.eq * op_scale)
    throw InputError("ccn_check: N(1) is not zero");

  std::vector<Element> basis, n_basis;
  for (int k = 0; k < d; ++k) {
    basis.push_back(Element::basis(alg, k));
    n_basis.push_back(n_op(basis.back()));
  }
  Element n_one = n_op(one);
  // Tuple slots 0..d-1 carry a_j = e_j, slot d carries a_d = 1.
  auto n_pair = [&](int p, int q) -> Element {
    if (p == d && q == d) return n_one;
    if (p == d) return n_basis[q];
    if (q == d) return n_basis[alg->adjoint_index(p)];
    if (auto m = alg->product_index(alg->adjoint_index(p), q)) return n_basis[*m];
    return Element(alg);
  };
  auto a_slot = [&](int p) -> const Element& { return p == d ? one : basis[p]; };

  Check c{"ccn"};
  double worst = 0.0;
  auto consider = [&](double v, Witness w) {
    ++c.evaluated;
    if (v > worst) {
      worst = v;
      c.witness = std::move(w);
    }
  };

  // Spanning family: in block k, b_j = e_{r0} at one slot j and the
  // completion b_d = -e_j b_j. The quadratic form lives on column 0.
  for (int blk = 0; blk < alg->num_blocks(); ++blk) {
    int n = alg->block_size(blk);
    int m = d * n;
    std::vector<Element> unit;  // e^{(blk)}_{r0}
    for (int r = 0; r < n; ++r) unit.push_back(Element::basis(alg, alg->basis_position(blk, r, 0)));
    Matrix h = kernels::fill_matrix(m, m, [&](int u, int v) {
      int j = u / n, r = u % n, jp = v / n, rp = v % n;
      const Element& b = unit[r];
      const Element& bp = unit[rp];
      Element bd = -(a_slot(j) * b);
      Element bpd = -(a_slot(jp) * bp);
      Element q = b.adjoint() * n_pair(j, jp) * bp + b.adjoint() * n_pair(j, d) * bpd +
                  bd.adjoint() * n_pair(d, jp) * bp + bd.adjoint() * n_pair(d, d) * bpd;
      return q.block(blk)(0, 0);
    });
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()),
                                             Eigen::EigenvaluesOnly);
    double hi = es.eigenvalues()(m - 1);
    consider(hi, Witness{"positive direction of the basis-tuple form (block)", {hi}, {blk}});
  }

  // Seeded random tuples with the same completion.
  Rng rng(seed);
  for (int t = 0; t < random_trials; ++t) {
    std::vector<Element> b(d + 1, Element(alg));
    Element sum(alg);
    for (int j = 0; j < d; ++j) {
      b[j] = random_element(alg, rng);
      sum += basis[j] * b[j];
    }
    b[d] = -sum;
    Element q(alg);
    for (int p = 0; p <= d; ++p)
      for (int r = 0; r <= d; ++r) q += b[p].adjoint() * n_pair(p, r) * b[r];
    auto ev = spectrum(0.5 * (q + q.adjoint()));
    double scale = 1.0;
    for (const auto& x : b) scale = std::max(scale, x.norm() * x.norm());
    consider(ev.back() / scale, Witness{"positive direction of a random tuple (trial)", {ev.back()}, {t}});
  }
  c.residual = std::max(0.0, worst);
  c.passed = c.residual <= tol.pos * op_scale;
  if (c.passed) c.witness.reset();
  return c;
}

CdCForm amplify_cdc(const CdCForm& gamma, int n) {
  const AlgebraPtr& base = gamma.algebra();
  AlgebraPtr big = amplify(*base, n);
  int bd = big->dim();
  // Basis element K of M_n(A) is the matrix unit e_{pq} tensored with a base
  // matrix unit u.
  struct Split {
    int p, q, u;
  };
  std::vector<Split> split(bd);
  for (int k = 0; k < bd; ++k) {
    const auto& idx = big->basis_index(k);
    int s = base->block_size(idx.block);
    split[k] = {idx.row / s, idx.col / s,
                base->basis_position(idx.block, idx.row % s, idx.col % s)};
  }
  auto gram = kernels::pair_table(bd, [&](int k, int l) {
    const Split& a = split[k];
    const Split& b = split[l];
    if (a.p != b.p) return Element(big);
    std::vector<std::vector<Element>> e(n, std::vector<Element>(n, Element(base)));
    e[a.q][b.q] = gamma.gram(a.u, b.u);
    return assemble_matrix(big, e);
  });
  return CdCForm(big, std::move(gram), gamma.scale());
}

}  // namespace nca
