// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mupa/channel.hpp"
#include "mupa/utility.hpp"

namespace mupa {

struct SolverSettings {
  double tol_root = 1e-12;  ///< on |beta - (1 - w)| at the interior root
  double tol_kkt = 1e-8;    ///< certification bound on every KKT residual
  double tol_step = 1e-10;  ///< gradient projection stops when ||dP||_inf <= this
  std::int64_t max_iter = 100000;
  double gp_step = 1e-3;    ///< W per unit gradient
  double p_floor = 1e-9;    ///< numeric floor on every power, W
  bool record_gp_trace = false;  ///< keep the objective after every GP iteration

  void validate() const;
};

/// One instance of the sum-power-constrained utility maximization.
struct Scenario {
  std::vector<UserParams> users;
  EffectiveGains delta;
  double p_sum_max = 1.0;  ///< system power budget, W
  SolverSettings settings{};

  [[nodiscard]] std::size_t size() const noexcept { return users.size(); }

  /// Throws DomainError / DimensionError on a broken invariant.
  void validate() const;
};

enum class BudgetCase {
  SumSlack,  ///< sum of individual maximizers fits in the budget
  SumTight,  ///< budget binds; optimum lies on sum(P) = p_sum_max
};

[[nodiscard]] std::string_view to_string(BudgetCase c) noexcept;

/// KKT residuals of the box- and sum-constrained problem at a candidate point.
///
/// Multipliers are reconstructed from the candidate: mu (lower bound) is
/// max(0, lambda - U') at the floor, nu (upper bound) is max(0, U' - lambda)
/// at the cap, both zero elsewhere.
struct KktReport {
  std::vector<double> mu;
  std::vector<double> nu;
  std::vector<double> stationarity;       ///< |U'_i + mu_i - nu_i - lambda|
  std::vector<double> slackness_lower;    ///< |mu_i (P_i - p_floor)|
  std::vector<double> slackness_upper;    ///< |nu_i (P_i - P^u_i)|
  double slackness_sum = 0.0;             ///< |lambda (sum P - p_sum_max)|
  double box_gap = 0.0;                   ///< worst bound violation
  double sum_gap = 0.0;                   ///< max(0, sum P - p_sum_max)
  double dual_gap = 0.0;                  ///< max(0, -lambda)

  [[nodiscard]] double max_stationarity() const;
  [[nodiscard]] double max_residual() const;
};

struct AllocationDiagnostics {
  std::vector<double> se;
  std::vector<double> ee;
  std::vector<double> utility;
  double total_utility = 0.0;
  KktReport kkt;
  std::int64_t gp_iterations = 0;
  std::int64_t gp_backtracks = 0;
  /// ||P_polished - P_gradient_projection||_inf; zero in the slack case.
  double polish_shift = 0.0;
  /// Total utility at the start and after each GP iteration (opt-in).
  std::vector<double> gp_trace;
};

struct Allocation {
  std::vector<double> p;
  std::vector<double> p_u;
  double lambda = 0.0;
  BudgetCase budget_case = BudgetCase::SumSlack;
  AllocationDiagnostics diagnostics;
};

/// Individual maximizer of U_i over (0, p_max].
///
/// Returns p_max when w > 1 - beta(p_max); otherwise the unique root of
/// beta(P) = 1 - w, found by Newton's method safeguarded with bisection.
[[nodiscard]] double compute_pu(const UserParams& user, double delta,
                                const SolverSettings& settings = {});

struct CappedSimplexProjection {
  std::vector<double> x;
  double shift = 0.0;  ///< mu with x_i = clamp(y_i - mu, floor, cap_i)
};

/// Euclidean projection of y onto {floor <= x_i <= caps_i, sum x = total}.
///
/// Throws InfeasibleError if sum(caps) < total or total < N floor.
[[nodiscard]] CappedSimplexProjection project_capped_simplex(std::span<const double> y,
                                                             std::span<const double> caps,
                                                             double total,
                                                             double floor);

/// Centralized optimum. Throws NonConvergenceError when the iteration budget
/// runs out or the KKT certificate exceeds settings.tol_kkt.
[[nodiscard]] Allocation solve_centralized(const Scenario& sc);

[[nodiscard]] KktReport kkt_residuals(const Scenario& sc, const Allocation& alloc);

/// Sum of per-user utilities at p (all entries must be > 0).
[[nodiscard]] double total_utility(const Scenario& sc, std::span<const double> p);

}  // namespace mupa
