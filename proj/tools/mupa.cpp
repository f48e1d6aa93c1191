// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line harness: solve a scenario, run the preference and fairness
// sweeps, or integrate the distributed primal-dual dynamics.
//
// Exit codes: 0 success, 1 input error, 2 solver non-convergence.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "mupa/csv.hpp"
#include "mupa/errors.hpp"
#include "mupa/experiments.hpp"
#include "mupa/scenario_file.hpp"

namespace {

constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

struct CommonOptions {
  std::string scenario;
  std::string out;
  bool strict = false;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--scenario", opts.scenario, "Scenario file (YAML)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out, "Output CSV path (stdout when omitted for sweeps)");
  cmd->add_flag("--strict", opts.strict, "Treat primal-dual non-convergence as an error");
  cmd->add_option("--seed", opts.seed, "Seed for random channels (overrides the file)");
}

// Writes via `emit` to --out, or to stdout when no path is given.
void write_output(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw mupa::ParseError(fmt::format("cannot write '{}'", path));
  emit(file);
}

int cmd_solve(const CommonOptions& opts) {
  const auto loaded = mupa::load_scenario(opts.scenario, opts.seed);
  const auto report = mupa::run_solve(loaded.scenario);
  mupa::print_solve_report(std::cout, loaded.scenario, report);
  if (!opts.out.empty()) {
    write_output(opts.out, [&](std::ostream& os) {
      mupa::write_allocation_csv(os, loaded.scenario, report.allocation);
    });
  }
  return 0;
}

int cmd_sweep_diversity(const CommonOptions& opts, std::size_t grid) {
  const auto loaded = mupa::load_scenario(opts.scenario, opts.seed);
  const auto rows = mupa::sweep_diversity(loaded.scenario, grid);
  write_output(opts.out, [&](std::ostream& os) { mupa::write_diversity_csv(os, rows); });
  return 0;
}

int cmd_sweep_fairness(const CommonOptions& opts, const std::vector<double>& delta1_db,
                       double delta2_min, double delta2_max, std::size_t grid) {
  const auto loaded = mupa::load_scenario(opts.scenario, opts.seed);
  const auto delta2 = mupa::linspace(delta2_min, delta2_max, grid);
  const auto rows = mupa::sweep_fairness(loaded.scenario, delta1_db, delta2);
  write_output(opts.out, [&](std::ostream& os) { mupa::write_fairness_csv(os, rows); });
  return 0;
}

int cmd_primal_dual(const CommonOptions& opts) {
  const auto loaded = mupa::load_scenario(opts.scenario, opts.seed);
  const auto report = mupa::run_primal_dual(loaded.scenario, loaded.pd);
  if (!opts.out.empty()) {
    write_output(opts.out,
                 [&](std::ostream& os) { mupa::write_trajectory_csv(os, report.trajectory); });
  }
  mupa::print_primal_dual_summary(std::cout, report);
  if (!report.trajectory.converged) {
    fmt::print(std::cerr, "warning: primal-dual dynamics stopped at max_steps = {}\n",
               loaded.pd.max_steps);
    if (opts.strict) return kExitSolver;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Utility-maximizing uplink MU-MIMO power allocation"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Centralized optimal allocation for a scenario");
  add_common(solve, solve_opts);

  CommonOptions div_opts;
  std::size_t div_grid = mupa::kDefaultGrid;
  auto* diversity =
      app.add_subcommand("sweep-diversity", "Sweep (w1, w2) over [0,1]^2 (two users)");
  add_common(diversity, div_opts);
  diversity->add_option("--grid", div_grid, "Points per axis")->check(CLI::Range(2, 100000));

  CommonOptions fair_opts;
  std::size_t fair_grid = mupa::kDefaultGrid;
  std::vector<double> delta1_db{-20.0, 0.0, 20.0};
  double delta2_min = -20.0;
  double delta2_max = 20.0;
  auto* fairness =
      app.add_subcommand("sweep-fairness", "Jain index over (delta1, delta2) in dB (two users)");
  add_common(fairness, fair_opts);
  fairness->add_option("--grid", fair_grid, "Points on the delta2 axis")
      ->check(CLI::Range(1, 100000));
  fairness->add_option("--delta1", delta1_db, "delta1 levels in dB")->delimiter(',');
  fairness->add_option("--delta2-min", delta2_min, "Lower end of the delta2 range, dB");
  fairness->add_option("--delta2-max", delta2_max, "Upper end of the delta2 range, dB");

  CommonOptions pd_opts;
  auto* primal_dual =
      app.add_subcommand("primal-dual", "Integrate the distributed primal-dual dynamics");
  add_common(primal_dual, pd_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*solve) return cmd_solve(solve_opts);
    if (*diversity) return cmd_sweep_diversity(div_opts, div_grid);
    if (*fairness) return cmd_sweep_fairness(fair_opts, delta1_db, delta2_min, delta2_max, fair_grid);
    if (*primal_dual) return cmd_primal_dual(pd_opts);
  } catch (const mupa::NonConvergenceError& e) {
    fmt::print(std::cerr, "error: solver did not converge: {}\n", e.what());
    return kExitSolver;
  } catch (const mupa::NumericOverflowError& e) {
    fmt::print(std::cerr, "error: numeric overflow: {}\n", e.what());
    return kExitSolver;
  } catch (const mupa::Error& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
