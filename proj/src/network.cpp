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

#include "nca/network.hpp"

#include <cmath>
#include <numeric>
#include <queue>

#include <Eigen/Eigenvalues>

#include "nca/kernels.hpp"
#include "nca/random.hpp"

namespace nca {

namespace {

constexpr double kNetworkScale = 0.5;

void require_node(const ResistanceNetwork& net, int x, const char* what) {
  if (x < 0 || x >= net.size())
    throw InputError(std::string(what) + ": node index out of range");
}

// (Delta + J/n)^{-1}, the Green matrix of a connected network up to J/n.
RealMatrix green_matrix(const ResistanceNetwork& net) {
  if (!net.connected())
    throw DisconnectedError("network is disconnected: potentials are undefined");
  int n = net.size();
  RealMatrix lap = network_laplacian(net).matrix().real();
  RealMatrix j = RealMatrix::Constant(n, n, 1.0 / n);
  return (lap + j).ldlt().solve(RealMatrix::Identity(n, n));
}

// Compositions of `parts` units over n nodes, lexicographic.
void compositions(int n, int parts, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out, std::size_t cap) {
  if (out.size() >= cap) return;
  if (static_cast<int>(cur.size()) == n - 1) {
    cur.push_back(parts);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = parts; k >= 0; --k) {
    cur.push_back(k);
    compositions(n, parts - k, cur, out, cap);
    cur.pop_back();
  }
}

std::vector<int> random_composition(int n, int parts, Rng& rng) {
  // Stars and bars: n - 1 bars among parts + n - 1 slots.
  std::vector<int> slots(parts + n - 1);
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng.engine());
  std::vector<int> bars(slots.begin(), slots.begin() + (n - 1));
  std::sort(bars.begin(), bars.end());
  std::vector<int> out;
  int prev = -1;
  for (int b : bars) {
    out.push_back(b - prev - 1);
    prev = b;
  }
  out.push_back(parts + n - 2 - prev);
  return out;
}

}  // namespace

ResistanceNetwork ResistanceNetwork::from_conductances(RealMatrix c,
                                                       SymmetryPolicy policy,
                                                       bool allow_negative) {
  int n = static_cast<int>(c.rows());
  if (n == 0 || c.cols() != n)
    throw InputError("network: conductance matrix must be square and nonempty");
  if (!c.allFinite()) throw InputError("network: conductances must be finite");
  for (int x = 0; x < n; ++x)
    if (c(x, x) != 0.0) throw InputError("network: conductance diagonal must be zero");

  ResistanceNetwork net;
  if (c != c.transpose()) {
    if (policy == SymmetryPolicy::strict)
      throw InputError("network: conductance matrix is not symmetric");
    c = 0.5 * (c + c.transpose()).eval();
    net.symmetrized_ = true;
  }
  if (!allow_negative && (c.array() < 0.0).any())
    throw InputError("network: negative conductance");
  net.c_ = std::move(c);
  net.allow_negative_ = allow_negative;
  net.algebra_ = counting_algebra(n);
  return net;
}

std::vector<std::vector<int>> ResistanceNetwork::components(
    const std::vector<int>& nodes) const {
  int n = size();
  std::vector<char> in(n, 0), seen(n, 0);
  for (int x : nodes) in.at(x) = 1;
  std::vector<std::vector<int>> out;
  for (int s : nodes) {
    if (seen[s]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      comp.push_back(x);
      for (int y = 0; y < n; ++y)
        if (in[y] && !seen[y] && c_(x, y) != 0.0) {
          seen[y] = 1;
          q.push(y);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool ResistanceNetwork::connected() const {
  std::vector<int> all(size());
  std::iota(all.begin(), all.end(), 0);
  return components(all).size() == 1;
}

EnergyForm network_energy(const ResistanceNetwork& net) {
  CdCForm gamma = network_cdc(net.algebra(), net.c(), kNetworkScale,
                              net.allows_negative());
  // A negative conductance breaks complete positivity of Gamma; the form is
  // still wanted for the Markov counterexample.
  return energy_form(gamma, net.allows_negative());
}

Laplacian network_laplacian(const ResistanceNetwork& net, const Tolerances& tol) {
  return laplacian(network_energy(net), tol);
}

Element potential(const ResistanceNetwork& net, int p, int q) {
  require_node(net, p, "potential");
  require_node(net, q, "potential");
  if (p == q) throw InputError("potential: p and q must differ");
  RealMatrix g = green_matrix(net);
  RealVector h = g.col(p) - g.col(q);
  return Element::real_function(net.algebra(),
                                std::vector<double>(h.data(), h.data() + h.size()));
}

double resistance_distance(const ResistanceNetwork& net, int p, int q) {
  require_node(net, p, "resistance");
  require_node(net, q, "resistance");
  if (p == q) {
    if (!net.connected())
      throw DisconnectedError("network is disconnected: potentials are undefined");
    return 0.0;
  }
  std::vector<double> h = potential(net, p, q).real_values();
  return h[p] - h[q];
}

RealMatrix resistance_matrix(const ResistanceNetwork& net) {
  RealMatrix g = green_matrix(net);
  int n = net.size();
  RealMatrix r = RealMatrix::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      RealVector h = g.col(p) - g.col(q);
      r(p, q) = r(q, p) = h[p] - h[q];
    }
  return r;
}

// ---------------------------------------------------------------- metric checks

MetricReport metric_checks(const ResistanceNetwork& net, std::uint64_t seed,
                           double grid_step, int max_grid_points,
                           const Tolerances& tol) {
  if (!net.connected())
    throw DisconnectedError("network is disconnected: the metric is not finite");
  const double slack = 1e-10;
  int n = net.size();
  MetricReport rep;
  RealMatrix r = resistance_matrix(net);
  Laplacian lap = network_laplacian(net, tol);
  const AlgebraPtr& alg = net.algebra();

  {
    auto worst = kernels::triple_max(n, [&](int x, int y, int z) {
      return r(x, z) - r(x, y) - r(y, z);
    });
    Check& c = rep.triangle;
    c.evaluated = static_cast<std::size_t>(n) * n * n;
    c.residual = std::max(0.0, worst.value);
    if (worst.value > slack) {
      c.passed = false;
      c.violations = 1;
      c.witness = Witness{"rho_r(x,z) - rho_r(x,y) - rho_r(y,z)",
                          {worst.value}, {worst.i, worst.j, worst.k}};
    }
  }

  std::vector<State> pure;
  for (int x = 0; x < n; ++x) pure.push_back(State::point(alg, x));
  {
    Check& c = rep.square_relation;
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        double rho = energy_metric(lap, pure[x], pure[y], tol);
        double diff = std::abs(rho * rho - r(x, y));
        ++c.evaluated;
        if (diff > c.residual) {
          c.residual = diff;
          c.witness = Witness{"|rho_E^2 - rho_r|", {rho * rho, r(x, y)}, {x, y}};
        }
        if (diff > tol.eq * std::max(1.0, r(x, y))) {
          c.passed = false;
          ++c.violations;
        }
      }
    if (c.passed) c.witness.reset();
  }

  StateEmbedding sigma(lap, pure.front(), tol);
  std::vector<Vector> emb;
  for (const State& s : pure) emb.push_back(sigma(s));
  {
    auto worst = kernels::triple_max(n, [&](int x, int y, int z) {
      return -(emb[x] - emb[y]).dot(emb[z] - emb[y]).real();
    });
    // Re <s(x) - s(y), s(z) - s(y)> >= 0; worst.value is minus the smallest.
    Check& c = rep.acute_angles;
    c.evaluated = static_cast<std::size_t>(n) * n * n;
    c.residual = std::max(0.0, worst.value);
    if (worst.value > slack) {
      c.passed = false;
      c.violations = 1;
      c.witness = Witness{"Re<s(x)-s(y), s(z)-s(y)>", {-worst.value},
                          {worst.i, worst.j, worst.k}};
    }
  }

  // Mixed states: rho_E^2 = |s(x) - s(z)|^2 can fail the triangle inequality.
  int parts = std::max(1, static_cast<int>(std::lround(1.0 / grid_step)));
  std::vector<std::vector<int>> grid;
  {
    std::vector<int> cur;
    const std::size_t enum_cap = 20000;
    compositions(n, parts, cur, grid, enum_cap + 1);
    Rng rng(seed);
    if (grid.size() > enum_cap) {
      grid.clear();
      for (int k = 0; k < max_grid_points; ++k)
        grid.push_back(random_composition(n, parts, rng));
    } else if (static_cast<int>(grid.size()) > max_grid_points) {
      std::shuffle(grid.begin(), grid.end(), rng.engine());
      grid.resize(max_grid_points);
    }
  }
  std::vector<std::vector<double>> probs;
  std::vector<Vector> pts;
  for (const auto& comp : grid) {
    std::vector<double> p(n);
    for (int x = 0; x < n; ++x) p[x] = static_cast<double>(comp[x]) / parts;
    pts.push_back(sigma(State::from_density(Element::real_function(alg, p))));
    probs.push_back(std::move(p));
  }
  rep.grid_points = static_cast<int>(pts.size());
  auto worst = kernels::triple_max(rep.grid_points, [&](int x, int y, int z) {
    return -2.0 * (pts[x] - pts[y]).dot(pts[z] - pts[y]).real();
  });
  if (worst.i >= 0 && worst.value > slack)
    rep.mixture = MixtureWitness{probs[worst.i], probs[worst.j], probs[worst.k],
                                 worst.value};
  return rep;
}

// ---------------------------------------------------------------- maximum principle

MaxPrincipleReport maximum_principle_check(const ResistanceNetwork& net,
                                           const Element& f,
                                           const std::vector<int>& y,
                                           const Tolerances& tol) {
  if (!same_algebra(f.algebra(), net.algebra()))
    throw InputError("maximum principle: f lives on a different algebra");
  if (!f.is_self_adjoint(tol.eq))
    throw InputError("maximum principle: f must be real-valued");
  int n = net.size();
  std::vector<char> in_y(n, 0);
  for (int x : y) {
    require_node(net, x, "maximum principle");
    in_y[x] = 1;
  }
  std::vector<double> v = f.real_values();
  MaxPrincipleReport rep;

  // (Delta f)(x) = sum_z (f(x) - f(z)) c_xz on Y
  for (int x : y) {
    double s = 0.0;
    for (int z = 0; z < n; ++z) s += (v[x] - v[z]) * net.c()(x, z);
    rep.harmonic_residual = std::max(rep.harmonic_residual, std::abs(s));
  }
  double scale = 1.0;
  for (double t : v) scale = std::max(scale, std::abs(t));
  rep.harmonic_on_y = rep.harmonic_residual <= tol.eq * scale * std::max(1.0, net.c().cwiseAbs().maxCoeff());

  std::vector<char> in_closure = in_y;
  for (int x : y)
    for (int z = 0; z < n; ++z)
      if (net.c()(x, z) != 0.0) in_closure[z] = 1;
  for (int x = 0; x < n; ++x)
    if (in_closure[x]) rep.closure.push_back(x);
  for (int x : rep.closure) {
    if (rep.argmax_closure < 0 || v[x] > v[rep.argmax_closure]) rep.argmax_closure = x;
    if (rep.argmin_closure < 0 || v[x] < v[rep.argmin_closure]) rep.argmin_closure = x;
  }

  rep.principle_holds = true;
  if (rep.closure.empty()) return rep;
  double m = v[rep.argmax_closure];
  double eps = tol.eq * scale;
  for (const auto& comp : net.components(y)) {
    bool attains = false;
    for (int x : comp) attains = attains || v[x] >= m - eps;
    if (!attains) continue;
    // Constant on the piece and on its neighbours.
    for (int x : comp)
      for (int z = 0; z < n; ++z)
        if ((z == x || net.c()(x, z) != 0.0) && std::abs(v[z] - m) > eps)
          rep.principle_holds = false;
  }
  return rep;
}

Check potential_extrema(const ResistanceNetwork& net, int p, int q,
                        const Tolerances& tol) {
  Check c("potential_extrema");
  std::vector<double> h = potential(net, p, q).real_values();
  int n = net.size();
  for (int x = 0; x < n; ++x) {
    ++c.evaluated;
    double over = std::max(h[x] - h[p], h[q] - h[x]);
    if (over > c.residual) {
      c.residual = over;
      c.witness = Witness{"h_pq outside [h(q), h(p)]", {h[x], h[q], h[p]}, {x, p, q}};
    }
    if (over > tol.eq) {
      c.passed = false;
      ++c.violations;
    }
  }
  if (c.passed) c.witness.reset();
  return c;
}

// ---------------------------------------------------------------- Markov counterexample

MarkovViolation markov_violation_witness(const RealMatrix& c, const Tolerances& tol) {
  ResistanceNetwork net =
      ResistanceNetwork::from_conductances(c, SymmetryPolicy::strict, true);
  EnergyForm e = network_energy(net);
  RealMatrix g = e.gram().real();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g, Eigen::EigenvaluesOnly);
  double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -tol.pos * top)
    throw InputError("markov witness: the energy form is not nonnegative");

  MarkovViolation out;
  int n = net.size();
  double most = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (net.c()(x, y) < most) {
        most = net.c()(x, y);
        out.x = x;
        out.y = y;
      }
  if (out.x < 0) return out;

  const AlgebraPtr& alg = net.algebra();
  Element dx = Element::delta(alg, out.x);
  Element dy = Element::delta(alg, out.y);
  double eyy = e(dy, dy).real();
  if (eyy <= 0.0) throw InputError("markov witness: E(delta_y, delta_y) must be positive");
  // E(f, f) = E(dx, dx) + 2 r c_xy + r^2 E(dy, dy) is minimized here.
  out.r = -most / eyy;
  out.f = dx - dy * out.r;
  out.energy_f = e(out.f, out.f).real();
  Element pos = functional_calculus(out.f, PiecewiseLinear::positive_part()).value;
  out.energy_positive_part = e(pos, pos).real();
  out.violation = out.energy_positive_part - out.energy_f;
  out.found = out.violation > 0.0;
  return out;
}

}  // namespace nca
