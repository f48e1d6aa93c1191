// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include "mupa/primal_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "mupa/errors.hpp"

namespace mupa {

PdSettings PdSettings::defaults(std::size_t n) {
  PdSettings s;
  s.k.assign(n, 1e-3);
  return s;
}

void PdSettings::validate(std::size_t n) const {
  if (k.size() != n) {
    throw DimensionError(fmt::format("{} primal gains for {} users", k.size(), n));
  }
  for (const double ki : k) {
    if (!(ki > 0.0) || !std::isfinite(ki)) throw DomainError("primal gains must be > 0");
  }
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("dual gain must be > 0");
  if (!init_p.empty() && init_p.size() != n) {
    throw DimensionError("initial power vector has the wrong length");
  }
  if (!(init_lambda >= 0.0)) throw DomainError("initial price must be >= 0");
  if (!(tol_eq > 0.0)) throw DomainError("equilibrium tolerance must be > 0");
  if (max_steps <= 0 || record_every <= 0) {
    throw DomainError("max_steps and record_every must be positive");
  }
}

double clamp_plus(double f, double z) noexcept { return z <= 0.0 ? std::max(f, 0.0) : f; }

double clamp_box(double f, double z, double a) noexcept {
  if (z <= 0.0) return std::max(f, 0.0);
  if (z >= a) return std::min(f, 0.0);
  return f;
}

PdState step(const PdState& state, const Scenario& sc, std::span<const double> p_u,
             const PdSettings& settings) {
  const std::size_t n = sc.size();
  const double floor = sc.settings.p_floor;

  PdState next;
  next.p.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = state.p[i];
    sum += p;
    // Boundaries measured from the floor so the clamp and the floor agree.
    const double drive = clamp_box(utility_grad(p, sc.users[i], sc.delta[i]) - state.lambda,
                                   p - floor, p_u[i] - floor);
    next.p[i] = std::clamp(p + settings.k[i] * drive, floor, p_u[i]);
  }
  next.lambda =
      std::max(0.0, state.lambda + settings.g * clamp_plus(sum - sc.p_sum_max, state.lambda));

  bool finite = std::isfinite(next.lambda);
  for (const double p : next.p) finite = finite && std::isfinite(p);
  if (!finite) throw NumericOverflowError("primal-dual state became non-finite");
  return next;
}

double lyapunov(std::span<const double> p, double lambda, const Equilibrium& reference,
                const PdSettings& settings) {
  double v = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - reference.p[i];
    v += 0.5 * d * d / settings.k[i];
  }
  const double dl = lambda - reference.lambda;
  return v + dl * dl / (2.0 * settings.g);
}

Trajectory integrate(const Scenario& sc, const PdSettings& settings,
                     const std::optional<Equilibrium>& reference) {
  sc.validate();
  const std::size_t n = sc.size();
  settings.validate(n);
  if (reference && reference->p.size() != n) {
    throw DimensionError("Lyapunov reference has the wrong length");
  }

  Trajectory traj;
  traj.p_u.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    traj.p_u[i] = compute_pu(sc.users[i], sc.delta[i], sc.settings);
  }

  PdState state;
  state.lambda = settings.init_lambda;
  if (settings.init_p.empty()) {
    state.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) state.p[i] = 0.5 * traj.p_u[i];
  } else {
    state.p = settings.init_p;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(state.p[i] > 0.0 && state.p[i] <= traj.p_u[i])) {
        throw DomainError(fmt::format("initial power of user {} is outside (0, P^u]", i + 1));
      }
      state.p[i] = std::max(state.p[i], sc.settings.p_floor);
    }
  }

  auto record = [&](std::int64_t t) {
    TrajectoryRecord r;
    r.t = t;
    r.p = state.p;
    r.lambda = state.lambda;
    r.utility.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      r.utility[i] = utility(state.p[i], sc.users[i], sc.delta[i]);
      r.total_utility += r.utility[i];
    }
    r.lyapunov = reference ? lyapunov(state.p, state.lambda, *reference, settings)
                           : std::numeric_limits<double>::quiet_NaN();
    traj.records.push_back(std::move(r));
  };

  record(0);
  std::int64_t t = 0;
  while (t < settings.max_steps) {
    PdState next = step(state, sc, traj.p_u, settings);
    ++t;
    double motion = std::abs(next.lambda - state.lambda);
    for (std::size_t i = 0; i < n; ++i) motion = std::max(motion, std::abs(next.p[i] - state.p[i]));
    state = std::move(next);

    const bool done = motion <= settings.tol_eq;
    if (done || t % settings.record_every == 0 || t == settings.max_steps) {
      if (traj.records.back().t != t) record(t);
    }
    if (done) {
      traj.converged = true;
      break;
    }
  }

  traj.steps = t;
  traj.messages_broadcast = t;
  traj.messages_uplink = t * static_cast<std::int64_t>(n);
  traj.final_state = state;
  return traj;
}

}  // namespace mupa
