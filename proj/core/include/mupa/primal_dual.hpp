// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mupa/solver.hpp"

namespace mupa {

/// Gains and stopping rules of the distributed price dynamics.
struct PdSettings {
  std::vector<double> k;       ///< per-user primal gains (> 0)
  double g = 1e-3;             ///< dual gain (> 0)
  std::vector<double> init_p;  ///< empty: P^u / 2
  double init_lambda = 0.0;
  double tol_eq = 1e-10;       ///< equilibrium: max(|dP|_inf, |dlambda|) <= tol_eq
  std::int64_t max_steps = 10'000'000;
  std::int64_t record_every = 100;

  /// Default gains (all 1e-3) for n users.
  [[nodiscard]] static PdSettings defaults(std::size_t n);

  void validate(std::size_t n) const;
};

struct PdState {
  std::vector<double> p;
  double lambda = 0.0;
};

/// (P*, lambda*) used as the Lyapunov reference point.
struct Equilibrium {
  std::vector<double> p;
  double lambda = 0.0;

  [[nodiscard]] static Equilibrium from(const Allocation& a) { return {a.p, a.lambda}; }
};

struct TrajectoryRecord {
  std::int64_t t = 0;
  std::vector<double> p;
  double lambda = 0.0;
  std::vector<double> utility;
  double total_utility = 0.0;
  double lyapunov = 0.0;  ///< NaN when no reference point was supplied
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::int64_t steps = 0;
  std::int64_t messages_broadcast = 0;  ///< one lambda broadcast per step
  std::int64_t messages_uplink = 0;     ///< one P_i report per user per step
  bool converged = false;
  std::vector<double> p_u;
  PdState final_state;
};

/// [f]^+_z: max(f, 0) when z <= 0, f otherwise.
[[nodiscard]] double clamp_plus(double f, double z) noexcept;

/// [f]^{a+}_z: max(f, 0) when z <= 0, min(f, 0) when z >= a, f in between.
[[nodiscard]] double clamp_box(double f, double z, double a) noexcept;

/// One explicit-Euler step of the primal-dual dynamics with unit time step,
/// followed by projection onto [p_floor, P^u] x [0, inf).
/// Throws NumericOverflowError if the new state is not finite.
[[nodiscard]] PdState step(const PdState& state, const Scenario& sc,
                           std::span<const double> p_u, const PdSettings& settings);

/// V = 1/2 sum (P_i - P*_i)^2 / k_i + (lambda - lambda*)^2 / (2 g).
[[nodiscard]] double lyapunov(std::span<const double> p, double lambda,
                              const Equilibrium& reference, const PdSettings& settings);

/// Iterates `step` from the configured start until the per-step motion drops
/// below tol_eq or max_steps is reached (the latter leaves converged = false).
/// P^u is computed with compute_pu. Records are taken at t = 0, every
/// record_every steps and at the final step.
[[nodiscard]] Trajectory integrate(const Scenario& sc, const PdSettings& settings,
                                   const std::optional<Equilibrium>& reference = std::nullopt);

}  // namespace mupa
