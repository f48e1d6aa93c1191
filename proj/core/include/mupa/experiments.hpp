// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "mupa/metrics.hpp"
#include "mupa/primal_dual.hpp"
#include "mupa/solver.hpp"

namespace mupa {

inline constexpr std::size_t kDefaultGrid = 41;

/// n evenly spaced points on [a, b], endpoints exact.
[[nodiscard]] std::vector<double> linspace(double a, double b, std::size_t n);

struct SolveReport {
  Allocation allocation;
  FairnessReport fairness;
};

[[nodiscard]] SolveReport run_solve(const Scenario& sc);
void print_solve_report(std::ostream& out, const Scenario& sc, const SolveReport& report);
/// Columns user, w, delta_db, p_u, p, se, ee, utility.
void write_allocation_csv(std::ostream& out, const Scenario& sc, const Allocation& alloc);

// SE/EE preference sweep over (w1, w2) in [0,1]^2 for a two-user scenario.
struct DiversityRow {
  double w1, w2, p1, p2, se1, se2, ee1, ee2;
};

/// Rows ordered with w1 as the outer and w2 as the inner index.
/// Throws DimensionError unless the scenario has exactly two users.
[[nodiscard]] std::vector<DiversityRow> sweep_diversity(const Scenario& base,
                                                        std::size_t grid = kDefaultGrid);
void write_diversity_csv(std::ostream& out, std::span<const DiversityRow> rows);

// Jain index as the two users' gains move apart.
struct FairnessRow {
  double delta1_db, delta2_db, jain, u1, u2;
};

/// One row per (delta1, delta2) pair, delta1 outer.
[[nodiscard]] std::vector<FairnessRow> sweep_fairness(const Scenario& base,
                                                      std::span<const double> delta1_db,
                                                      std::span<const double> delta2_db);
void write_fairness_csv(std::ostream& out, std::span<const FairnessRow> rows);

struct PrimalDualReport {
  Allocation centralized;
  Trajectory trajectory;
  double final_gap = 0.0;            ///< ||P_pd - P*||_inf
  double lyapunov_worst_excess = 0.0;  ///< <= 0 when V never rose beyond slack
};

/// Largest V_{k+1} - V_k - slack * max(1, V_k) over consecutive records.
[[nodiscard]] double lyapunov_worst_excess(const Trajectory& traj, double relative_slack);

/// Solves centrally for the reference point, then integrates the dynamics.
[[nodiscard]] PrimalDualReport run_primal_dual(const Scenario& sc, const PdSettings& settings);
void print_primal_dual_summary(std::ostream& out, const PrimalDualReport& report);

}  // namespace mupa
