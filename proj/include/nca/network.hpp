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

#include <optional>
#include <vector>

#include "nca/state_metric.hpp"

namespace nca {

enum class SymmetryPolicy { symmetrize, strict };

// Conductance network on X = {0, ..., n-1}. The energy form uses the factor
// 1/2 with counting measure, so Delta = C - T and E(delta_x, delta_y) = -c_xy.
class ResistanceNetwork {
 public:
  static ResistanceNetwork from_conductances(
      RealMatrix c, SymmetryPolicy policy = SymmetryPolicy::symmetrize,
      bool allow_negative = false);

  int size() const { return static_cast<int>(c_.rows()); }
  const RealMatrix& c() const { return c_; }
  // True when the input was asymmetric and got averaged with its transpose.
  bool symmetrized() const { return symmetrized_; }
  bool allows_negative() const { return allow_negative_; }
  const AlgebraPtr& algebra() const { return algebra_; }
  // Graph connectivity over nonzero conductances.
  bool connected() const;
  std::vector<std::vector<int>> components(const std::vector<int>& nodes) const;

 private:
  RealMatrix c_;
  AlgebraPtr algebra_;
  bool symmetrized_ = false;
  bool allow_negative_ = false;
};

// (Delta f)(x) = sum_y (f(x) - f(y)) c_xy
Laplacian network_laplacian(const ResistanceNetwork& net,
                            const Tolerances& tol = {});
EnergyForm network_energy(const ResistanceNetwork& net);

// Trace-zero solution of Delta h = delta_p - delta_q.
Element potential(const ResistanceNetwork& net, int p, int q);
// h_pq(p) - h_pq(q)
double resistance_distance(const ResistanceNetwork& net, int p, int q);
RealMatrix resistance_matrix(const ResistanceNetwork& net);

struct MixtureWitness {
  // Probability vectors of the three states x, y, z.
  std::vector<double> x, y, z;
  // rho(x,z)^2 - rho(x,y)^2 - rho(y,z)^2
  double violation = 0.0;
};

struct MetricReport {
  Check triangle{"resistance_triangle"};
  Check square_relation{"resistance_equals_energy_metric_squared"};
  Check acute_angles{"pure_state_acute_angles"};
  // Searched, not proven: absence means none at this grid resolution.
  std::optional<MixtureWitness> mixture;
  int grid_points = 0;
  std::vector<Check> checks() const { return {triangle, square_relation, acute_angles}; }
};

MetricReport metric_checks(const ResistanceNetwork& net, std::uint64_t seed = 0,
                           double grid_step = 0.1, int max_grid_points = 120,
                           const Tolerances& tol = {});

struct MaxPrincipleReport {
  bool harmonic_on_y = false;
  double harmonic_residual = 0.0;
  // For each connected piece of Y attaining the closure maximum, f must be
  // constant on that piece.
  bool principle_holds = false;
  int argmax_closure = -1;
  int argmin_closure = -1;
  std::vector<int> closure;
};

MaxPrincipleReport maximum_principle_check(const ResistanceNetwork& net,
                                           const Element& f,
                                           const std::vector<int>& y,
                                           const Tolerances& tol = {});

// h_pq attains its maximum at p and its minimum at q.
Check potential_extrema(const ResistanceNetwork& net, int p, int q,
                        const Tolerances& tol = {});

struct MarkovViolation {
  bool found = false;
  int x = -1, y = -1;
  double r = 0.0;
  Element f;           // delta_x - r delta_y
  double energy_f = 0.0;
  double energy_positive_part = 0.0;  // E(max(f,0)) = E(delta_x)
  double violation = 0.0;             // energy_positive_part - energy_f
};

// For a network with a negative conductance and a positive energy form:
// f = delta_x - r delta_y with F = max(t, 0) raises the energy.
MarkovViolation markov_violation_witness(const RealMatrix& c,
                                         const Tolerances& tol = {});

}  // namespace nca
