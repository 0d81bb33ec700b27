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

#include "nca/commands.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nca/dirac.hpp"
#include "nca/energy.hpp"
#include "nca/quotient.hpp"
#include "nca/state_metric.hpp"
#include "nca/stddev.hpp"

namespace nca {

namespace {

const std::vector<double> kDefaultTimes{0.0, 0.1, 1.0, 10.0};
const char* kDisconnected = "disconnected";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Check info(std::string name, bool value) {
  Check c(std::move(name));
  c.value = value;
  c.evaluated = 1;
  return c;
}

Check bound_check(std::string name, double residual, double bound, std::string what) {
  Check c(std::move(name));
  c.evaluated = 1;
  c.residual = residual;
  if (residual > bound) {
    c.passed = false;
    c.violations = 1;
    c.witness = Witness{std::move(what), {residual}, {}};
  }
  return c;
}

Json witness_json(const Witness& w) {
  return Json{{"what", w.what}, {"values", w.values}, {"indices", w.indices}};
}

Json check_json(const Check& c) {
  Json j{{"check", c.name}, {"passed", c.passed}, {"residual", c.residual},
         {"evaluated", c.evaluated}, {"violations", c.violations}};
  if (c.value) j["value"] = *c.value;
  if (c.witness) j["witness"] = witness_json(*c.witness);
  return j;
}

Json eigenvalues_json(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  Json out = Json::array();
  for (int k = 0; k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()(k));
  return out;
}

// ---------------------------------------------------------------- model

struct Model {
  CdCForm gamma;
  std::optional<SuperOperator> generator;
  std::optional<ResistanceNetwork> network;  // counting-measure network, when applicable
  RealMatrix c;
  bool is_network = false;
};

struct Context {
  Context(const ProblemSpec& s, const RunOptions& o) : spec(s), options(o) {}

  const ProblemSpec& spec;
  const RunOptions& options;
  Tolerances tol;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
  std::optional<Model> model;

  const Model& get_model(const std::string& command);
};

SuperOperator network_generator(const AlgebraPtr& alg, const RealMatrix& c) {
  int n = static_cast<int>(c.rows());
  return SuperOperator::from_map(alg, [&](const Element& f) {
    std::vector<cplx> v = f.values(), out(n, 0.0);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) out[x] += (v[x] - v[y]) * c(x, y);
    return Element::function(alg, out);
  });
}

bool counting_weights(const Algebra& alg) {
  for (double w : alg.weights())
    if (w != 1.0) return false;
  return alg.is_commutative();
}

const Model& Context::get_model(const std::string& command) {
  if (model) return *model;
  if (!spec.generator)
    throw InputError(command + ": the spec has no generator (missing field: generator)");
  const GeneratorSpec& g = *spec.generator;
  const AlgebraPtr& alg = spec.algebra;
  Model m;
  if (g.kind == "lindblad") {
    SuperOperator n = SuperOperator::zero(alg);
    for (const Element& v : g.vs) n = n + lindblad_generator(v);
    m.gamma = gamma_from_generator(n, 1.0, tol.eq);
    m.generator = n;
  } else if (g.kind == "matrix") {
    m.gamma = gamma_from_generator(*g.superop, g.scale, tol.eq);
    m.generator = *g.superop;
  } else if (g.kind == "network") {
    RealMatrix c = g.c;
    if (c != c.transpose()) {
      if (g.symmetry == SymmetryPolicy::strict)
        throw InputError("network: conductance matrix is not symmetric (strict mode)");
      c = (0.5 * (c + c.transpose())).eval();
      warnings.push_back("conductance matrix was not symmetric; replaced by (c + c^T)/2");
    }
    m.c = c;
    m.is_network = true;
    m.gamma = network_cdc(alg, c, 0.5, g.allow_negative);
    m.generator = network_generator(alg, c);
    if (counting_weights(*alg))
      m.network = ResistanceNetwork::from_conductances(c, SymmetryPolicy::strict,
                                                       g.allow_negative);
  } else if (g.kind == "group") {
    m.gamma = group_action_cdc(g.autos, g.weights, tol.eq);
    SuperOperator n = SuperOperator::zero(alg);
    for (std::size_t k = 0; k < g.autos.size(); ++k)
      n = n + (SuperOperator::identity(alg) - g.autos[k]) * cplx(g.weights[k]);
    m.generator = n;
  } else if (g.kind == "spectral_triple") {
    m.gamma = spectral_triple_cdc(g.dirac, alg, tol.eq);
  } else {
    throw InputError("unknown generator kind " + g.kind);
  }
  model = std::move(m);
  return *model;
}

using Entries = std::vector<Check>;

// ---------------------------------------------------------------- commands

void cmd_check_cdc(Context& ctx, Entries& out, Json& data) {
  const Model& m = ctx.get_model("check-cdc");
  CdCReport rep = is_cdc(m.gamma, ctx.tol);
  for (const Check& c : rep.checks()) out.push_back(c);
  if (m.generator) {
    Check ccn = ccn_check(*m.generator, ctx.seed, 8, ctx.tol);
    out.push_back(ccn);
    Check agree("ccn_agrees_with_complete_positivity");
    agree.evaluated = 1;
    agree.passed = ccn.passed == rep.completely_positive.passed;
    if (!agree.passed) {
      agree.violations = 1;
      agree.witness = Witness{"ccn, completely_positive",
                              {double(ccn.passed), double(rep.completely_positive.passed)}, {}};
    }
    out.push_back(agree);
  }
  RealityReport real = reality_checks(m.gamma, ctx.tol);
  out.push_back(real.tau_real);
  out.push_back(real.tau_balanced);
  data["is_cdc"] = rep.is_cdc();
  data["tau_real"] = real.real();
  data["tau_balanced"] = real.balanced();
  data["scale"] = m.gamma.scale();
  data["algebra"] = encode_algebra(*m.gamma.algebra());
  if (m.is_network && rep.is_cdc())
    data["conductances"] = encode_real_matrix(conductances_from_cdc(m.gamma, ctx.tol));
}

// Laplacian used by the analytic commands: Delta itself for tau-real forms,
// its natural part otherwise.
Laplacian working_laplacian(Context& ctx, const Model& m, bool& natural) {
  EnergyForm e = energy_form(m.gamma, true, ctx.tol);
  Laplacian lap = laplacian(e, ctx.tol);
  natural = involution_defect(lap.superop) >
            ctx.tol.eq * std::max(1.0, lap.matrix().cwiseAbs().maxCoeff());
  return natural ? natural_part(lap, ctx.tol) : lap;
}

void cmd_laplacian(Context& ctx, Entries& out, Json& data) {
  const Model& m = ctx.get_model("laplacian");
  CdCReport cdc = is_cdc(m.gamma, ctx.tol);
  Check is = info("is_cdc", cdc.is_cdc());
  is.passed = cdc.is_cdc();
  out.push_back(is);
  EnergyForm e = energy_form(m.gamma, true, ctx.tol);
  Laplacian lap = laplacian(e, ctx.tol);
  double mag = std::max(1.0, lap.matrix().cwiseAbs().maxCoeff());

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (lap.matrix() + lap.matrix().adjoint()),
                                           Eigen::EigenvaluesOnly);
  double herm = (lap.matrix() - lap.matrix().adjoint()).cwiseAbs().maxCoeff();
  out.push_back(bound_check("laplacian_positive",
                            std::max(herm, -es.eigenvalues().minCoeff()), ctx.tol.pos * mag,
                            "Hermitian defect or negative eigenvalue of Delta"));
  out.push_back(bound_check("laplacian_annihilates_unit",
                            lap(Element::identity(lap.algebra())).norm(), ctx.tol.eq * mag,
                            "||Delta(1)||"));

  RealityReport real = reality_checks(m.gamma, ctx.tol);
  out.push_back(real.tau_real);
  out.push_back(real.tau_balanced);
  if (real.real()) {
    CdCForm gd = gamma_delta(lap, ctx.tol);
    bool equal = gd.distance(m.gamma) <= ctx.tol.eq * std::max(1.0, m.gamma.magnitude());
    Check c = info("gamma_equals_gamma_delta", equal);
    c.residual = gd.distance(m.gamma);
    c.passed = equal == real.balanced();
    out.push_back(c);
  }

  if (cdc.is_cdc()) {
    Check mk = markov_suite(e, ctx.seed, 20, {1, 2}, ctx.tol);
    mk.name = "completely_markov";
    out.push_back(mk);
    Check lb = leibniz_suite(e, ctx.seed, 20, ctx.tol);
    lb.name = "leibniz";
    out.push_back(lb);
    Check mat("l2_matricial");
    for (auto [a, b] : {std::pair{1, 1}, {1, 2}, {2, 2}})
      merge_check(mat, matricial_check(e, a, b, ctx.seed, 5));
    out.push_back(mat);
    if (real.real()) {
      DirichletReconstruction rec = cdc_from_dirichlet_form(e, false, ctx.seed, ctx.tol);
      Check c("reconstruction");
      c.evaluated = 1;
      c.passed = rec.ok();
      c.residual = rec.trace_pairing.residual;
      if (!rec.ok()) {
        c.violations = 1;
        c.witness = Witness{"Gamma_Delta is not a CdC reproducing E", {}, {}};
      }
      out.push_back(c);
    }
  }

  data["matrix"] = encode_matrix(lap.matrix());
  data["eigenvalues"] = eigenvalues_json(lap.matrix());
  data["kernel_dim"] = lap.kernel_dim;
  data["connected"] = connectedness(lap, ctx.tol);
}

void cmd_heat(Context& ctx, Entries& out, Json& data) {
  const Model& m = ctx.get_model("heat");
  bool natural = false;
  Laplacian lap = working_laplacian(ctx, m, natural);
  std::vector<double> ts = !ctx.options.times.empty() ? ctx.options.times
                           : !ctx.spec.times.empty()  ? ctx.spec.times
                                                      : kDefaultTimes;
  Json per = Json::array();
  for (double t : ts) {
    HeatMap h = heat_map(lap, t, ctx.tol);
    out.push_back(bound_check("heat_unital[t=" + fmt(t) + "]", h.unital_residual,
                              ctx.tol.eq, "||Phi_t(1) - 1||"));
    Check cp = bound_check("heat_cp[t=" + fmt(t) + "]",
                           std::max(0.0, -h.choi_min_eigenvalue), ctx.tol.pos,
                           "negative Choi eigenvalue");
    out.push_back(cp);
    per.push_back(Json{{"t", t},
                       {"unital_residual", h.unital_residual},
                       {"choi_min_eigenvalue", h.choi_min_eigenvalue}});
  }
  out.push_back(resolvent_check(lap.superop, ts, ctx.seed, 10, ctx.tol));
  data["natural_part"] = natural;
  data["times"] = per;
}

// Pairwise energy metric with the disconnected sentinel.
struct Distances {
  Json closed = Json::array();
  Json dual = Json::array();
  Check agree{"closed_form_matches_dual"};
  Check connected{"metrically_connected"};
  RealMatrix values;
  std::vector<std::vector<bool>> finite;
};

Distances pairwise(Context& ctx, const Laplacian& lap, const EnergyForm& e,
                   const std::vector<State>& states) {
  int n = static_cast<int>(states.size());
  Distances dist;
  dist.values = RealMatrix::Zero(n, n);
  dist.finite.assign(n, std::vector<bool>(n, true));
  dist.connected.evaluated = 0;
  for (int i = 0; i < n; ++i) {
    Json rc = Json::array(), rd = Json::array();
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        rc.push_back(0.0);
        rd.push_back(0.0);
        continue;
      }
      ++dist.connected.evaluated;
      try {
        double a = energy_metric(lap, states[i], states[j], ctx.tol);
        double b = dual_metric(e, states[i], states[j], ctx.tol);
        dist.values(i, j) = a;
        rc.push_back(a);
        rd.push_back(b);
        double diff = std::abs(a - b);
        ++dist.agree.evaluated;
        if (diff > dist.agree.residual) {
          dist.agree.residual = diff;
          dist.agree.witness = Witness{"closed form vs dual", {a, b}, {i, j}};
        }
        if (diff > 1e-8 * std::max(1.0, a)) {
          dist.agree.passed = false;
          ++dist.agree.violations;
        }
      } catch (const DisconnectedError&) {
        dist.finite[i][j] = false;
        rc.push_back(kDisconnected);
        rd.push_back(kDisconnected);
        dist.connected.passed = false;
        ++dist.connected.violations;
        if (!dist.connected.witness)
          dist.connected.witness = Witness{"no finite-energy path between states", {}, {i, j}};
      }
    }
    dist.closed.push_back(rc);
    dist.dual.push_back(rd);
  }
  if (dist.agree.passed) dist.agree.witness.reset();
  return dist;
}

void cmd_metric(Context& ctx, Entries& out, Json& data) {
  const Model& m = ctx.get_model("metric");
  bool natural = false;
  Laplacian lap = working_laplacian(ctx, m, natural);
  if (natural)
    throw InputError("metric: the energy form is not tau-real, so it has no symmetric Laplacian");
  EnergyForm e = energy_form_from_laplacian(lap);
  const AlgebraPtr& alg = lap.algebra();
  std::vector<State> states;
  for (const Element& rho : ctx.spec.states) states.push_back(State::from_density(rho, ctx.tol.pos));
  if (states.empty()) {
    if (!alg->is_commutative())
      throw InputError("metric: missing field states (required on noncommutative algebras)");
    for (int x = 0; x < alg->dim(); ++x) states.push_back(State::point(alg, x));
  }
  Distances dist = pairwise(ctx, lap, e, states);
  out.push_back(dist.agree);
  out.push_back(dist.connected);

  int n = static_cast<int>(states.size());
  Check tri("energy_metric_triangle");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (!dist.finite[i][k] || !dist.finite[i][j] || !dist.finite[j][k]) continue;
        if (i == j || j == k || i == k) continue;
        double v = dist.values(i, k) - dist.values(i, j) - dist.values(j, k);
        ++tri.evaluated;
        if (v > tri.residual) {
          tri.residual = v;
          tri.witness = Witness{"rho(x,z) - rho(x,y) - rho(y,z)", {v}, {i, j, k}};
        }
        if (v > 1e-10) {
          tri.passed = false;
          ++tri.violations;
        }
      }
  if (tri.passed) tri.witness.reset();
  out.push_back(tri);

  if (!ctx.options.pairs.empty()) {
    Json pairs = Json::array();
    for (auto [p, q] : ctx.options.pairs) {
      if (p < 0 || q < 0 || p >= n || q >= n)
        throw InputError("--pairs: state index out of range");
      Json entry{{"p", p}, {"q", q}};
      entry["energy"] = dist.closed[p][q];
      pairs.push_back(entry);
    }
    data["pairs"] = pairs;
  }
  data["energy"] = dist.closed;
  data["dual"] = dist.dual;
}

// Resistance on each connected piece; "disconnected" across pieces.
Json resistance_table(const ResistanceNetwork& net, RealMatrix& r,
                      std::vector<std::vector<bool>>& finite) {
  int n = net.size();
  r = RealMatrix::Zero(n, n);
  finite.assign(n, std::vector<bool>(n, false));
  std::vector<int> all(n);
  for (int x = 0; x < n; ++x) all[x] = x;
  for (const auto& comp : net.components(all)) {
    int k = static_cast<int>(comp.size());
    for (int a : comp)
      for (int b : comp) finite[a][b] = true;
    if (k == 1) continue;
    RealMatrix sub(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) sub(a, b) = net.c()(comp[a], comp[b]);
    RealMatrix rs = resistance_matrix(
        ResistanceNetwork::from_conductances(sub, SymmetryPolicy::strict, net.allows_negative()));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) r(comp[a], comp[b]) = rs(a, b);
  }
  Json out = Json::array();
  for (int x = 0; x < n; ++x) {
    Json row = Json::array();
    for (int y = 0; y < n; ++y)
      if (finite[x][y])
        row.push_back(r(x, y));
      else
        row.push_back(kDisconnected);
    out.push_back(row);
  }
  return out;
}

void cmd_resistance(Context& ctx, Entries& out, Json& data) {
  const Model& m = ctx.get_model("resistance");
  if (!m.is_network) throw InputError("resistance: the generator must be a network");
  if (!m.network)
    throw InputError("resistance: networks use counting measure (all trace weights 1)");
  const ResistanceNetwork& net = *m.network;
  int n = net.size();
  for (auto [p, q] : ctx.options.pairs)
    if (p < 0 || q < 0 || p >= n || q >= n) throw InputError("--pairs: node out of range");

  if (net.allows_negative() && (net.c().array() < 0.0).any()) {
    MarkovViolation w = markov_violation_witness(net.c(), ctx.tol);
    Check c("markov_negative_conductance");
    c.evaluated = 1;
    c.passed = !w.found;
    c.residual = w.violation;
    if (w.found) {
      c.violations = 1;
      c.witness = Witness{"E(max(f,0)) - E(f) for f = delta_x - r delta_y",
                          {w.r, w.energy_f, w.energy_positive_part, w.violation},
                          {w.x, w.y}};
    }
    out.push_back(c);
    data["markov_witness"] = Json{{"x", w.x}, {"y", w.y}, {"r", w.r},
                                  {"f", encode_element(w.f)}, {"F", "max(t, 0)"},
                                  {"violation", w.violation}};
    return;
  }

  RealMatrix r;
  std::vector<std::vector<bool>> finite;
  data["resistance"] = resistance_table(net, r, finite);
  Laplacian lap = network_laplacian(net, ctx.tol);
  Json energy = Json::array();
  for (int x = 0; x < n; ++x) {
    Json row = Json::array();
    for (int y = 0; y < n; ++y)
      if (finite[x][y])
        row.push_back(x == y ? 0.0
                             : energy_metric(lap, State::point(net.algebra(), x),
                                             State::point(net.algebra(), y), ctx.tol));
      else
        row.push_back(kDisconnected);
    energy.push_back(row);
  }
  data["energy"] = energy;

  bool connected = net.connected();
  Check conn("network_connected");
  conn.evaluated = 1;
  conn.passed = connected;
  if (!connected) {
    conn.violations = 1;
    conn.witness = Witness{"number of connected pieces",
                           {double(net.components([&] {
                              std::vector<int> all(n);
                              for (int x = 0; x < n; ++x) all[x] = x;
                              return all;
                            }()).size())},
                           {}};
  }
  out.push_back(conn);

  if (connected) {
    MetricReport mr = metric_checks(net, ctx.seed, 0.1, 120, ctx.tol);
    for (const Check& c : mr.checks()) out.push_back(c);
    Check mix = info("mixture_triangle_counterexample", mr.mixture.has_value());
    if (mr.mixture) {
      mix.residual = mr.mixture->violation;
      Json w{{"x", mr.mixture->x}, {"y", mr.mixture->y}, {"z", mr.mixture->z},
             {"violation", mr.mixture->violation}};
      data["mixture_witness"] = w;
    } else {
      data["mixture_witness"] = "not found at this resolution";
    }
    data["grid_points"] = mr.grid_points;
    out.push_back(mix);

    std::vector<std::pair<int, int>> pairs = ctx.options.pairs;
    if (pairs.empty())
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          if (p != q) pairs.emplace_back(p, q);
    Check ext("potential_extrema");
    Json listing = Json::array();
    for (auto [p, q] : pairs) {
      if (p == q) throw InputError("--pairs: p and q must differ");
      merge_check(ext, potential_extrema(net, p, q, ctx.tol));
      if (!ctx.options.pairs.empty())
        listing.push_back(Json{{"p", p},
                               {"q", q},
                               {"resistance", r(p, q)},
                               {"potential", potential(net, p, q).real_values()}});
    }
    out.push_back(ext);
    if (!ctx.options.pairs.empty()) data["pairs"] = listing;
  }
  data["symmetrized"] = !ctx.warnings.empty();
}

void cmd_quotient(Context& ctx, Entries& out, Json& data) {
  const Model& m = ctx.get_model("quotient");
  if (!ctx.spec.projection)
    throw InputError("quotient: missing field projection (or keep_blocks)");
  bool natural = false;
  Laplacian lap = working_laplacian(ctx, m, natural);
  if (natural) throw InputError("quotient: the energy form must be tau-real");
  QuotientData qd = split(lap, *ctx.spec.projection, ctx.tol);
  QuotientReport rep = quotient_checks(qd, ctx.seed, 20, ctx.tol);
  for (const Check& c : rep.checks()) out.push_back(c);
  data["kept_blocks"] = qd.kept_blocks;
  data["algebra"] = encode_algebra(*qd.sub);
  data["quotient_laplacian"] = encode_matrix(qd.quotient_laplacian.matrix());
  data["R"] = encode_matrix(qd.r);
  data["J"] = encode_matrix(qd.j);
  data["S"] = encode_matrix(qd.s);
}

void cmd_dirac(Context& ctx, Entries& out, Json& data) {
  const Model& m = ctx.get_model("dirac");
  DiracOperator d = dirac(build_bimodule(m.gamma, false, ctx.tol));
  DiracReport rep = dirac_report(d, ctx.seed, 20, ctx.tol);
  for (const Check& c : rep.checks()) out.push_back(c);
  data["dim_omega"] = rep.dim_omega;
  data["delta_factorization_residual"] = rep.factorization.residual;
  data["norm_formula_residual"] = rep.norm_formula.residual;
  if (m.network && m.network->connected()) {
    StarGraphReport sg = star_graph_check(*m.network, 1.0, ctx.seed, 20, ctx.tol);
    Check c = info("star_graph_parallelogram", sg.parallelogram_holds);
    c.passed = sg.agree();
    c.residual = sg.max_defect;
    c.witness = sg.witness;
    out.push_back(c);
    data["is_star"] = sg.is_star;
    data["parallelogram_holds"] = sg.parallelogram_holds;
  }
}

void cmd_stddev(Context& ctx, Entries& out, Json& data) {
  if (!ctx.spec.weight_element) throw InputError("stddev: missing field weight_element");
  StddevReport rep = stddev_report(ctx.spec.algebra, *ctx.spec.weight_element, ctx.seed, 20,
                                   ctx.tol);
  for (const Check& c : rep.checks()) out.push_back(c);
  Laplacian lap = stddev_closed_form(ctx.spec.algebra, *ctx.spec.weight_element, ctx.tol);
  data["laplacian"] = encode_matrix(lap.matrix());
  data["schur_vs_closed_residual"] = rep.schur_vs_closed;
  data["schur_vs_cdc_residual"] = rep.schur_vs_cdc;
  data["closed_vs_cdc_residual"] = rep.closed_vs_cdc;
}

using Handler = void (*)(Context&, Entries&, Json&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h{
      {"check-cdc", cmd_check_cdc}, {"laplacian", cmd_laplacian}, {"heat", cmd_heat},
      {"metric", cmd_metric},       {"resistance", cmd_resistance},
      {"quotient", cmd_quotient},   {"dirac", cmd_dirac},         {"stddev", cmd_stddev}};
  return h;
}

bool applicable(const std::string& name, Context& ctx) {
  const ProblemSpec& s = ctx.spec;
  if (name == "stddev") return s.weight_element.has_value();
  if (!s.generator) return false;
  if (name == "check-cdc" || name == "laplacian") return true;
  const Model& m = ctx.get_model("all");
  bool cdc = is_cdc(m.gamma, ctx.tol).is_cdc();
  bool real = reality_checks(m.gamma, ctx.tol).real();
  if (name == "heat") return cdc;
  if (name == "dirac") return cdc;
  if (name == "metric") return cdc && real && (!s.states.empty() || s.algebra->is_commutative());
  if (name == "resistance") return m.network.has_value();
  if (name == "quotient") return cdc && real && s.projection.has_value();
  return false;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, _] : handlers()) v.push_back(n);
    v.push_back("all");
    return v;
  }();
  return names;
}

Report run_command(const std::string& command, const ProblemSpec& spec,
                   const RunOptions& options) {
  Context ctx(spec, options);
  ctx.tol = spec.tolerances.value_or(Tolerances{});
  if (options.tol_pos) ctx.tol.pos = *options.tol_pos;
  if (options.tol_rank) ctx.tol.rank = *options.tol_rank;
  if (options.tol_eq) ctx.tol.eq = *options.tol_eq;
  ctx.seed = options.seed.value_or(spec.seed.value_or(0));

  Report rep;
  rep.command = command;
  rep.seed = ctx.seed;
  rep.tol = ctx.tol;

  if (command == "all") {
    for (const auto& [name, fn] : handlers()) {
      if (!applicable(name, ctx)) continue;
      Entries part;
      Json data = Json::object();
      fn(ctx, part, data);
      for (Check& c : part) {
        c.name = name + "." + c.name;
        rep.entries.push_back(std::move(c));
      }
      rep.data[name] = std::move(data);
    }
  } else {
    auto it = std::find_if(handlers().begin(), handlers().end(),
                           [&](const auto& h) { return h.first == command; });
    if (it == handlers().end()) throw InputError("unknown command " + command);
    it->second(ctx, rep.entries, rep.data);
  }
  std::stable_sort(rep.entries.begin(), rep.entries.end(),
                   [](const Check& a, const Check& b) { return a.name < b.name; });
  rep.warnings = ctx.warnings;
  return rep;
}

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const Check& c) { return !c.passed; }));
}

int exit_code(const Report& report) { return report.passed() ? 0 : 1; }

Json Report::to_json() const {
  Json j;
  j["command"] = command;
  j["seed"] = seed;
  j["tolerances"] = Json{{"pos", tol.pos}, {"rank", tol.rank}, {"eq", tol.eq}};
  j["summary"] = Json{{"passed", entries.size() - failures()},
                      {"failed", failures()},
                      {"all_passed", passed()}};
  Json list = Json::array();
  for (const Check& c : entries) list.push_back(check_json(c));
  j["entries"] = list;
  j["data"] = data;
  j["warnings"] = warnings;
  return j;
}

std::string Report::to_human() const {
  std::ostringstream os;
  os << "nca " << command << "  (seed " << seed << ")\n";
  std::size_t width = 5;
  for (const Check& c : entries) width = std::max(width, c.name.size());
  char buf[64];
  for (const Check& c : entries) {
    const char* status = !c.passed ? "FAIL" : c.value ? "INFO" : "PASS";
    os << "  " << status << "  " << c.name << std::string(width - c.name.size() + 2, ' ');
    std::snprintf(buf, sizeof buf, "residual %-12.4g", c.residual);
    os << buf;
    if (c.value) os << "  value " << (*c.value ? "true" : "false");
    os << "\n";
    if (!c.passed && c.witness) os << "        witness: " << c.witness->what << "\n";
  }
  for (const auto& w : warnings) os << "  warning: " << w << "\n";
  os << entries.size() - failures() << " passed, " << failures() << " failed\n";
  return os.str();
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dash = item.find('-');
    try {
      if (dash == std::string::npos) throw std::invalid_argument("");
      std::size_t u = 0, v = 0;
      std::string a = item.substr(0, dash), b = item.substr(dash + 1);
      int p = std::stoi(a, &u), q = std::stoi(b, &v);
      if (u != a.size() || v != b.size()) throw std::invalid_argument("");
      out.emplace_back(p, q);
    } catch (const std::exception&) {
      throw InputError("--pairs: expected p-q items separated by commas, got \"" + item + "\"");
    }
  }
  return out;
}

std::vector<double> parse_times(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double t = std::stod(item, &used);
      if (used != item.size() || !(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("");
      out.push_back(t);
    } catch (const std::exception&) {
      throw InputError("--t: expected nonnegative numbers separated by commas, got \"" + item +
                       "\"");
    }
  }
  return out;
}

}  // namespace nca
