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

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "nca/commands.hpp"

// Exit codes: 0 every check passed, 1 a property failed, 2 bad input.
int main(int argc, char** argv) {
  CLI::App app{"nca: verify carre du champ forms, Laplacians and resistance metrics"};
  app.require_subcommand(1);

  std::string spec_path;
  bool json = false;
  std::uint64_t seed = 0;
  double tol_pos = 0, tol_rank = 0, tol_eq = 0;
  std::string times, pairs;

  for (const auto& name : nca::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("spec", spec_path, "problem spec (JSON)")->required();
    sub->add_flag("--json", json, "machine-readable report");
    sub->add_option("--seed", seed, "seed for randomized witnesses (default 0)");
    sub->add_option("--tol-pos", tol_pos, "positivity tolerance (default 1e-9)");
    sub->add_option("--tol-rank", tol_rank, "rank tolerance (default 1e-10)");
    sub->add_option("--tol-eq", tol_eq, "equality tolerance (default 1e-9)");
    sub->add_option("--t", times, "comma-separated times for heat");
    sub->add_option("--pairs", pairs, "comma-separated node pairs p-q (0-based)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    nca::RunOptions opts;
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--tol-pos")) opts.tol_pos = tol_pos;
    if (sub->count("--tol-rank")) opts.tol_rank = tol_rank;
    if (sub->count("--tol-eq")) opts.tol_eq = tol_eq;
    for (const auto& t : {opts.tol_pos, opts.tol_rank, opts.tol_eq})
      if (t && !(*t > 0.0)) throw nca::InputError("tolerances must be positive");
    if (!times.empty()) opts.times = nca::parse_times(times);
    if (!pairs.empty()) opts.pairs = nca::parse_pairs(pairs);

    nca::ProblemSpec spec = nca::parse_spec_file(spec_path);
    nca::Report report = nca::run_command(sub->get_name(), spec, opts);
    if (json) {
      std::cout << nca::emit_json(report.to_json());
    } else {
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << report.to_human();
    }
    return nca::exit_code(report);
  } catch (const nca::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nca::DisconnectedError& e) {
    std::cerr << "disconnected: " << e.what() << "\n";
    return 1;
  }
}
