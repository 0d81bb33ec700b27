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

#include "nca/dirac.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "nca/energy.hpp"
#include "nca/kernels.hpp"
#include "nca/random.hpp"

namespace nca {

namespace {

// Canonical-coordinate matrix of x -> e_m x (left) or x -> x e_m (right).
Matrix unit_multiplication(const Algebra& alg, int m, bool left) {
  int d = alg.dim();
  Matrix out = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    auto p = left ? alg.product_index(m, k) : alg.product_index(k, m);
    if (p) out(*p, k) = 1.0;
  }
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

double largest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

void record(Check& c, double diff, double bound, Witness w) {
  ++c.evaluated;
  if (diff > c.residual) {
    c.residual = diff;
    c.witness = std::move(w);
  }
  if (diff > bound) {
    c.passed = false;
    ++c.violations;
  }
}

}  // namespace

Vector BimoduleSpace::differential(const Element& a) const {
  if (rank == 0) return Vector::Zero(0);
  Vector one = Element::identity(algebra()).coords();
  Vector ac = a.coords();
  Vector x = tensor(ac, one) - tensor(one, ac);
  return quotient * (kernel.adjoint() * x);
}

Matrix BimoduleSpace::left(const Element& a) const {
  Matrix out = Matrix::Zero(rank, rank);
  Vector c = a.coords();
  for (int m = 0; m < c.size(); ++m)
    if (c[m] != cplx(0.0)) out += c[m] * left_action[m];
  return out;
}

Matrix BimoduleSpace::right(const Element& a) const {
  Matrix out = Matrix::Zero(rank, rank);
  Vector c = a.coords();
  for (int m = 0; m < c.size(); ++m)
    if (c[m] != cplx(0.0)) out += c[m] * right_action[m];
  return out;
}

BimoduleSpace build_bimodule(const CdCForm& gamma, bool force, const Tolerances& tol) {
  if (!force && !is_cdc(gamma, tol).is_cdc())
    throw InputError("bimodule: the form is not a CdC (pass force to override)");
  const Algebra& alg = *gamma.algebra();
  int d = alg.dim();
  int dd = d * d;
  BimoduleSpace bs;
  bs.gamma = gamma;

  // Multiplication map in canonical coordinates and its kernel.
  Matrix mult = Matrix::Zero(d, dd);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (auto p = alg.product_index(i, j)) mult(*p, i * d + j) = 1.0;
  Eigen::JacobiSVD<Matrix> svd(mult, Eigen::ComputeFullV);
  int mrank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > 1e-12) ++mrank;
  bs.kernel = svd.matrixV().rightCols(dd - mrank);
  bs.ambient_dim = dd - mrank;

  // <e_i (x) e_j, e_k (x) e_l> = tau(e_j* Gamma(e_i, e_k) e_l)
  Matrix full = kernels::fill_matrix(dd, dd, [&](int row, int col) -> cplx {
    const Algebra::BasisIndex& bj = alg.basis_index(row % d);
    const Algebra::BasisIndex& bl = alg.basis_index(col % d);
    if (bj.block != bl.block || bj.col != bl.col) return 0.0;
    const Element& g = gamma.gram(row / d, col / d);
    return alg.weight(bj.block) * g.block(bj.block)(bj.row, bl.row);
  });
  bs.gram = bs.kernel.adjoint() * full * bs.kernel;
  bs.gram = 0.5 * (bs.gram + bs.gram.adjoint()).eval();

  int k = bs.ambient_dim;
  Matrix nulls(k, 0);
  if (k > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(bs.gram);
    const auto& ev = es.eigenvalues();
    double top = std::max(0.0, ev(k - 1));
    bs.gram_min_eigenvalue = ev(0);
    std::vector<int> pos, nul;
    for (int t = 0; t < k; ++t)
      (top > 0.0 && ev(t) > tol.rank * top ? pos : nul).push_back(t);
    bs.rank = static_cast<int>(pos.size());
    bs.quotient = Matrix(bs.rank, k);
    bs.lift = Matrix(k, bs.rank);
    for (int t = 0; t < bs.rank; ++t) {
      double s = std::sqrt(ev(pos[t]));
      bs.quotient.row(t) = s * es.eigenvectors().col(pos[t]).adjoint();
      bs.lift.col(t) = es.eigenvectors().col(pos[t]) / s;
    }
    nulls.resize(k, nul.size());
    for (std::size_t t = 0; t < nul.size(); ++t) nulls.col(t) = es.eigenvectors().col(nul[t]);
  } else {
    bs.quotient = Matrix(0, 0);
    bs.lift = Matrix(0, 0);
  }

  Matrix to_omega = bs.quotient * bs.kernel.adjoint();  // r x d^2
  Matrix from_omega = bs.kernel * bs.lift;              // d^2 x r
  Matrix null_vectors = bs.kernel * nulls;
  Matrix id = Matrix::Identity(d, d);
  double gscale = std::max(1.0, std::sqrt(std::max(0.0, bs.gram.cwiseAbs().maxCoeff())));
  for (int m = 0; m < d; ++m) {
    Matrix l = Eigen::kroneckerProduct(unit_multiplication(alg, m, true), id).eval();
    Matrix r = Eigen::kroneckerProduct(id, unit_multiplication(alg, m, false)).eval();
    bs.left_action.push_back(to_omega * l * from_omega);
    bs.right_action.push_back(to_omega * r * from_omega);
    if (null_vectors.cols() > 0 && bs.rank > 0) {
      double res = std::max((to_omega * l * null_vectors).cwiseAbs().maxCoeff(),
                            (to_omega * r * null_vectors).cwiseAbs().maxCoeff());
      bs.null_invariance_residual = std::max(bs.null_invariance_residual, res / gscale);
    }
  }
  for (int m = 0; m < d && bs.rank > 0; ++m) {
    double res = (bs.left_action[m].adjoint() - bs.left_action[alg.adjoint_index(m)])
                     .cwiseAbs()
                     .maxCoeff();
    bs.star_residual = std::max(bs.star_residual, res);
  }

  bs.dmatrix = Matrix::Zero(bs.rank, d);
  for (int j = 0; j < d && bs.rank > 0; ++j)
    bs.dmatrix.col(j) = bs.differential(Element::basis(gamma.algebra(), j)) /
                        std::sqrt(alg.basis_weight(j));
  return bs;
}

// ---------------------------------------------------------------- Dirac operator

static DiracOperator assemble(std::shared_ptr<const BimoduleSpace> space) {
  DiracOperator op;
  op.base_dim = space->algebra()->dim();
  op.omega_dim = space->rank;
  int n = op.base_dim + op.omega_dim;
  op.matrix = Matrix::Zero(n, n);
  op.matrix.bottomLeftCorner(op.omega_dim, op.base_dim) = space->dmatrix;
  op.matrix.topRightCorner(op.base_dim, op.omega_dim) = space->dmatrix.adjoint();
  op.space = std::move(space);
  return op;
}

DiracOperator dirac(const BimoduleSpace& bs) {
  return assemble(std::make_shared<const BimoduleSpace>(bs));
}

DiracOperator dirac(BimoduleSpace&& bs) {
  return assemble(std::make_shared<const BimoduleSpace>(std::move(bs)));
}

Matrix DiracOperator::pi(const Element& a) const {
  int n = base_dim + omega_dim;
  Matrix out = Matrix::Zero(n, n);
  out.topLeftCorner(base_dim, base_dim) = left_multiplication(a).matrix();
  if (omega_dim > 0) out.bottomRightCorner(omega_dim, omega_dim) = space->left(a);
  return out;
}

Matrix DiracOperator::grading() const {
  int n = base_dim + omega_dim;
  Matrix g = Matrix::Identity(n, n);
  g.bottomRightCorner(omega_dim, omega_dim) *= -1.0;
  return g;
}

double dirac_seminorm(const DiracOperator& d, const Element& a) {
  if (!same_algebra(a.algebra(), d.space->algebra()))
    throw InputError("dirac: element lives on a different algebra");
  Matrix p = d.pi(a);
  return largest_singular_value(d.matrix * p - p * d.matrix);
}

double gamma_norm_formula(const CdCForm& gamma, const Element& a) {
  Element as = a.adjoint();
  return std::sqrt(std::max(gamma(a, a).norm(), gamma(as, as).norm()));
}

DiracReport dirac_report(const DiracOperator& d, std::uint64_t seed, int count,
                         const Tolerances& tol) {
  const BimoduleSpace& bs = *d.space;
  const AlgebraPtr& alg = bs.algebra();
  DiracReport rep;
  rep.dim_omega = bs.rank;
  double mag = std::max(1.0, bs.gamma.magnitude());

  {
    double lo = std::max(0.0, -bs.gram_min_eigenvalue);
    double res = std::max({bs.null_invariance_residual, bs.star_residual, lo / mag});
    record(rep.bimodule, res, tol.eq,
           Witness{"null invariance, star defect, -min gram eigenvalue",
                   {bs.null_invariance_residual, bs.star_residual, -bs.gram_min_eigenvalue},
                   {}});
    if (rep.bimodule.passed) rep.bimodule.witness.reset();
  }

  {
    Matrix delta = energy_form(bs.gamma, true, tol).onb_gram();
    Matrix dd = bs.rank > 0 ? Matrix(bs.dmatrix.adjoint() * bs.dmatrix)
                            : Matrix::Zero(alg->dim(), alg->dim());
    double res = (dd - delta).cwiseAbs().maxCoeff();
    record(rep.factorization, res, tol.eq * mag,
           Witness{"max |d*d - Delta|", {res}, {}});
    if (rep.factorization.passed) rep.factorization.witness.reset();
  }

  Rng rng(seed);
  std::vector<Element> samples{Element::identity(alg)};
  for (int k = 0; k < alg->dim(); ++k) samples.push_back(Element::basis(alg, k));
  for (int k = 0; k < count; ++k) samples.push_back(random_element(alg, rng));
  for (std::size_t t = 0; t < samples.size(); ++t) {
    const Element& a = samples[t];
    double lhs = dirac_seminorm(d, a);
    double rhs = gamma_norm_formula(bs.gamma, a);
    record(rep.norm_formula, std::abs(lhs - rhs), 1e-8 * std::max(1.0, rhs),
           Witness{"||[D, a]|| vs Gamma norm formula", {lhs, rhs}, {static_cast<int>(t)}});
    double ls = dirac_seminorm(d, a.adjoint());
    record(rep.star_invariance, std::abs(ls - lhs), tol.eq * std::max(1.0, lhs),
           Witness{"||[D, a*]|| vs ||[D, a]||", {ls, lhs}, {static_cast<int>(t)}});
  }
  for (int k = 0; k < count && bs.rank > 0; ++k) {
    Element a = random_element(alg, rng);
    Element b = random_element(alg, rng);
    Vector lhs = bs.differential(a * b);
    Vector rhs = bs.right(b) * bs.differential(a) + bs.left(a) * bs.differential(b);
    double res = (lhs - rhs).cwiseAbs().maxCoeff();
    record(rep.leibniz_identity, res,
           tol.eq * std::max(1.0, a.norm() * b.norm() * std::sqrt(mag)),
           Witness{"|d(ab) - (da)b - a(db)|", {res}, {k}});
  }
  for (Check* c : {&rep.norm_formula, &rep.star_invariance, &rep.leibniz_identity})
    if (c->passed) c->witness.reset();
  return rep;
}

// ---------------------------------------------------------------- star graphs

StarGraphReport star_graph_check(const ResistanceNetwork& net, double scale,
                                 std::uint64_t seed, int count, const Tolerances& tol) {
  if (!net.connected())
    throw DisconnectedError("star graph check: network is disconnected");
  int n = net.size();
  const RealMatrix& c = net.c();
  StarGraphReport rep;
  for (int t = 0; t < n && !rep.is_star; ++t) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      for (int y = x + 1; y < n && ok; ++y)
        if (c(x, y) != 0.0 && x != t && y != t) ok = false;
    if (ok) {
      rep.is_star = true;
      rep.center = t;
    }
  }

  const AlgebraPtr& alg = net.algebra();
  DiracOperator d = dirac(build_bimodule(network_cdc(alg, c, scale), false, tol));
  auto sq = [&](const Element& f) {
    double v = dirac_seminorm(d, f);
    return v * v;
  };
  auto test = [&](const Element& f, const Element& g, std::vector<int> idx) {
    double lhs = sq(f + g) + sq(f - g);
    double rhs = 2.0 * sq(f) + 2.0 * sq(g);
    double defect = std::abs(lhs - rhs);
    double bound = 1e-8 * std::max(1.0, rhs);
    if (defect / std::max(1.0, rhs) > rep.max_defect / 1.0) {
      rep.max_defect = defect / std::max(1.0, rhs);
      if (defect > bound)
        rep.witness = Witness{"L(f+g)^2 + L(f-g)^2 vs 2L(f)^2 + 2L(g)^2", {lhs, rhs},
                              std::move(idx)};
    }
  };
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      test(Element::delta(alg, p), Element::delta(alg, q), {p, q});
  Rng rng(seed);
  for (int k = 0; k < count; ++k) {
    std::vector<double> f(n), g(n);
    for (int x = 0; x < n; ++x) {
      f[x] = rng.normal();
      g[x] = rng.normal();
    }
    test(Element::real_function(alg, f), Element::real_function(alg, g), {-1, k});
  }
  rep.parallelogram_holds = rep.max_defect <= 1e-8;
  if (rep.parallelogram_holds) rep.witness.reset();
  return rep;
}

}  // namespace nca
