// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include "mupa/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mupa/csv.hpp"
#include "mupa/errors.hpp"

namespace mupa {

namespace {

void require_two_users(const Scenario& sc, const char* what) {
  if (sc.size() != 2) {
    throw DimensionError(fmt::format("{} needs a two-user scenario, got {}", what, sc.size()));
  }
}

// Rows are checked against the source invariants before anything is written.
void check_power(double p, const UserParams& user, const char* what) {
  if (!(p > 0.0 && p <= user.p_max) || !std::isfinite(p)) {
    throw NonConvergenceError(fmt::format("{}: power {} outside (0, p_max]", what, p));
  }
}

}  // namespace

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = b;
  return out;
}

SolveReport run_solve(const Scenario& sc) {
  SolveReport r{.allocation = solve_centralized(sc), .fairness = {}};
  r.fairness = summarize(sc, r.allocation);
  return r;
}

void print_solve_report(std::ostream& out, const Scenario& sc, const SolveReport& report) {
  const auto& a = report.allocation;
  const auto& d = a.diagnostics;
  const double sum = std::accumulate(a.p.begin(), a.p.end(), 0.0);
  fmt::print(out, "case: {}\n", to_string(a.budget_case));
  fmt::print(out, "lambda: {}\n", format_number(a.lambda));
  fmt::print(out, "sum_p_watts: {} (budget {})\n", format_number(sum),
             format_number(sc.p_sum_max));
  fmt::print(out, "{:>4} {:>6} {:>14} {:>14} {:>14} {:>14} {:>14}\n", "user", "w", "p_u",
             "p", "se_nats", "ee_nats_per_J", "utility");
  for (std::size_t i = 0; i < sc.size(); ++i) {
    fmt::print(out, "{:>4} {:>6} {:>14} {:>14} {:>14} {:>14} {:>14}\n", i + 1,
               format_number(sc.users[i].w), format_number(a.p_u[i]), format_number(a.p[i]),
               format_number(d.se[i]), format_number(d.ee[i]), format_number(d.utility[i]));
  }
  fmt::print(out, "total_utility: {}\n", format_number(d.total_utility));
  fmt::print(out, "jain_index: {}\n", format_number(report.fairness.jain));
  fmt::print(out, "kkt_max_residual: {:.3e}\n", d.kkt.max_residual());
  if (a.budget_case == BudgetCase::SumTight) {
    fmt::print(out, "gp_iterations: {}\n", d.gp_iterations);
  }
}

void write_allocation_csv(std::ostream& out, const Scenario& sc, const Allocation& alloc) {
  const std::vector<std::string> header{"user", "w",  "delta_db", "p_u",
                                        "p",    "se", "ee",       "utility"};
  CsvWriter csv(out, header);
  for (std::size_t i = 0; i < sc.size(); ++i) {
    check_power(alloc.p[i], sc.users[i], "solve");
    const std::vector<double> row{static_cast<double>(i + 1), sc.users[i].w,
                                  10.0 * std::log10(sc.delta[i]), alloc.p_u[i], alloc.p[i],
                                  alloc.diagnostics.se[i], alloc.diagnostics.ee[i],
                                  alloc.diagnostics.utility[i]};
    csv.row(row);
  }
}

std::vector<DiversityRow> sweep_diversity(const Scenario& base, std::size_t grid) {
  require_two_users(base, "sweep-diversity");
  if (grid < 2) throw DomainError("sweep grid needs at least 2 points per axis");
  const auto ws = linspace(0.0, 1.0, grid);

  std::vector<DiversityRow> rows;
  rows.reserve(grid * grid);
  Scenario sc = base;
  for (const double w1 : ws) {
    for (const double w2 : ws) {
      sc.users[0].w = w1;
      sc.users[1].w = w2;
      const auto a = solve_centralized(sc);
      rows.push_back({w1, w2, a.p[0], a.p[1], a.diagnostics.se[0], a.diagnostics.se[1],
                      a.diagnostics.ee[0], a.diagnostics.ee[1]});
    }
  }
  for (const auto& r : rows) {
    check_power(r.p1, sc.users[0], "sweep-diversity");
    check_power(r.p2, sc.users[1], "sweep-diversity");
    if (r.p1 + r.p2 > sc.p_sum_max * (1.0 + 1e-12)) {
      throw NonConvergenceError("sweep-diversity: budget exceeded");
    }
  }
  return rows;
}

void write_diversity_csv(std::ostream& out, std::span<const DiversityRow> rows) {
  const std::vector<std::string> header{"w1", "w2", "P1", "P2", "SE1", "SE2", "EE1", "EE2"};
  CsvWriter csv(out, header);
  for (const auto& r : rows) {
    const std::array values{r.w1, r.w2, r.p1, r.p2, r.se1, r.se2, r.ee1, r.ee2};
    csv.row(values);
  }
}

std::vector<FairnessRow> sweep_fairness(const Scenario& base, std::span<const double> delta1_db,
                                        std::span<const double> delta2_db) {
  require_two_users(base, "sweep-fairness");
  std::vector<FairnessRow> rows;
  rows.reserve(delta1_db.size() * delta2_db.size());
  for (const double d1 : delta1_db) {
    for (const double d2 : delta2_db) {
      Scenario sc = base;
      const std::array db{d1, d2};
      sc.delta = gains_from_db(db);
      const auto a = solve_centralized(sc);
      const auto f = summarize(sc, a);
      rows.push_back({d1, d2, f.jain, f.per_user_utility[0], f.per_user_utility[1]});
    }
  }
  for (const auto& r : rows) {
    if (!(r.jain >= 0.5 && r.jain <= 1.0)) {
      throw NonConvergenceError("sweep-fairness: Jain index outside [1/2, 1]");
    }
  }
  return rows;
}

void write_fairness_csv(std::ostream& out, std::span<const FairnessRow> rows) {
  const std::vector<std::string> header{"delta1_db", "delta2_db", "jain", "U1", "U2"};
  CsvWriter csv(out, header);
  for (const auto& r : rows) {
    const std::array values{r.delta1_db, r.delta2_db, r.jain, r.u1, r.u2};
    csv.row(values);
  }
}

double lyapunov_worst_excess(const Trajectory& traj, double relative_slack) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.records.size(); ++k) {
    const double prev = traj.records[k - 1].lyapunov;
    const double cur = traj.records[k].lyapunov;
    worst = std::max(worst, cur - prev - relative_slack * std::max(1.0, prev));
  }
  return worst;
}

PrimalDualReport run_primal_dual(const Scenario& sc, const PdSettings& settings) {
  PrimalDualReport r;
  r.centralized = solve_centralized(sc);
  r.trajectory = integrate(sc, settings, Equilibrium::from(r.centralized));
  for (std::size_t i = 0; i < sc.size(); ++i) {
    r.final_gap =
        std::max(r.final_gap, std::abs(r.trajectory.final_state.p[i] - r.centralized.p[i]));
  }
  r.lyapunov_worst_excess = lyapunov_worst_excess(r.trajectory, 1e-6);
  for (const auto& rec : r.trajectory.records) {
    for (std::size_t i = 0; i < sc.size(); ++i) {
      if (!(rec.p[i] >= sc.settings.p_floor && rec.p[i] <= r.trajectory.p_u[i])) {
        throw NonConvergenceError("primal-dual: recorded power left its box");
      }
    }
    if (!(rec.lambda >= 0.0)) throw NonConvergenceError("primal-dual: negative price");
  }
  return r;
}

void print_primal_dual_summary(std::ostream& out, const PrimalDualReport& report) {
  const auto& t = report.trajectory;
  fmt::print(out, "converged: {}\n", t.converged ? "yes" : "no");
  fmt::print(out, "steps: {}\n", t.steps);
  fmt::print(out, "messages_broadcast: {}\n", t.messages_broadcast);
  fmt::print(out, "messages_uplink: {}\n", t.messages_uplink);
  fmt::print(out, "final_lambda: {}\n", format_number(t.final_state.lambda));
  fmt::print(out, "centralized_case: {}\n", to_string(report.centralized.budget_case));
  fmt::print(out, "gap_inf_watts: {:.6e}\n", report.final_gap);
  fmt::print(out, "lyapunov_worst_excess: {:.6e}\n", report.lyapunov_worst_excess);
}

}  // namespace mupa
