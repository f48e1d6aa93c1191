// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include "mupa/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "mupa/errors.hpp"

namespace mupa {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Absolute distance (W) under which a power is considered to sit on a bound.
constexpr double kBoundTol = 1e-12;

// Armijo constant for the backtracking safeguard of gradient projection.
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

bool at_lower(double p, double floor) { return p - floor <= kBoundTol; }

bool at_upper(double p, double cap) { return cap - p <= kBoundTol * std::max(1.0, cap); }

double inf_norm_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Power in [floor, cap] whose marginal utility equals `price`. U' is strictly
// decreasing on (0, P^u], so the answer is unique; the cap or the floor is
// returned when the price lies outside the attainable range.
double marginal_inverse(const UserParams& user, double delta, double price, double floor,
                        double cap, double warm) {
  if (utility_grad(cap, user, delta) >= price) return cap;
  if (utility_grad(floor, user, delta) <= price) return floor;

  double lo = floor;
  double hi = cap;
  double p = std::clamp(warm, floor, cap);
  if (p <= lo || p >= hi) p = 0.5 * (lo + hi);
  const double tol = 1e-14 * std::max(1.0, std::abs(price));
  for (int it = 0; it < 400; ++it) {
    const double excess = utility_grad(p, user, delta) - price;
    if (std::abs(excess) <= tol) return p;
    if (excess > 0.0) {
      lo = p;
    } else {
      hi = p;
    }
    if (hi - lo <= 4.0 * kEps * hi) return p;
    double next = p - excess / utility_hess(p, user, delta);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    p = next;
  }
  return p;
}

struct GradientProjectionResult {
  std::vector<double> p;
  double lambda = 0.0;
  std::int64_t iterations = 0;
  std::int64_t backtracks = 0;
  std::vector<double> trace;
};

// Projected gradient ascent on the equality slice sum P = p_sum_max,
// floor <= P <= P^u. The nominal step is settings.gp_step; it is halved only
// when a step would fail the Armijo ascent test, so the objective never
// decreases. Stopping uses the motion rescaled to the nominal step.
GradientProjectionResult gradient_projection(const Scenario& sc,
                                             std::span<const double> p_u) {
  const auto& cfg = sc.settings;
  const std::size_t n = sc.size();

  GradientProjectionResult out;
  out.p = project_capped_simplex(p_u, p_u, sc.p_sum_max, cfg.p_floor).x;
  double current = total_utility(sc, out.p);
  if (cfg.record_gp_trace) out.trace.push_back(current);

  std::vector<double> grad(n);
  std::vector<double> trial(n);
  double shift_over_step = 0.0;
  for (std::int64_t iter = 1; iter <= cfg.max_iter; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = utility_grad(out.p[i], sc.users[i], sc.delta[i]);
    }

    double step = cfg.gp_step;
    CappedSimplexProjection proj;
    double next = current;
    double motion = 0.0;
    for (int bt = 0;; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = out.p[i] + step * grad[i];
      proj = project_capped_simplex(trial, p_u, sc.p_sum_max, cfg.p_floor);
      motion = inf_norm_diff(proj.x, out.p) * (cfg.gp_step / step);
      double ascent = 0.0;
      for (std::size_t i = 0; i < n; ++i) ascent += grad[i] * (proj.x[i] - out.p[i]);
      next = total_utility(sc, proj.x);
      const bool sufficient =
          next >= current + kArmijo * ascent - 4.0 * kEps * std::abs(current);
      if (sufficient || motion <= cfg.tol_step || bt == kMaxBacktracks) break;
      step *= 0.5;
      ++out.backtracks;
    }

    out.p = proj.x;
    current = next;
    if (cfg.record_gp_trace) out.trace.push_back(current);
    shift_over_step = proj.shift / step;
    out.iterations = iter;
    if (motion <= cfg.tol_step) {
      // Interior coordinates satisfy U'_i = lambda at the fixed point.
      double sum = 0.0;
      std::size_t interior = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!at_lower(out.p[i], cfg.p_floor) && !at_upper(out.p[i], p_u[i])) {
          sum += utility_grad(out.p[i], sc.users[i], sc.delta[i]);
          ++interior;
        }
      }
      out.lambda = interior > 0 ? sum / static_cast<double>(interior) : shift_over_step;
      out.lambda = std::max(0.0, out.lambda);
      return out;
    }
  }
  throw NonConvergenceError(fmt::format(
      "gradient projection did not reach ||dP|| <= {:g} within {} iterations",
      cfg.tol_step, cfg.max_iter));
}

struct PricedAllocation {
  std::vector<double> p;
  double lambda = 0.0;
};

// Solves sum_i P_i(lambda) = p_sum_max, P_i(lambda) = (U'_i)^{-1}(lambda)
// clamped to [floor, P^u_i], by Newton's method on lambda safeguarded with
// bisection. Used to sharpen the gradient-projection fixed point down to
// round-off so the KKT certificate can be checked at tol_kkt.
PricedAllocation polish_on_budget(const Scenario& sc, std::span<const double> p_u,
                                  std::span<const double> warm_p, double warm_lambda) {
  const auto& cfg = sc.settings;
  const std::size_t n = sc.size();

  PricedAllocation out;
  out.p.assign(warm_p.begin(), warm_p.end());
  auto evaluate = [&](double price, double& slope) {
    slope = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out.p[i] = marginal_inverse(sc.users[i], sc.delta[i], price, cfg.p_floor, p_u[i],
                                  out.p[i]);
      if (!at_lower(out.p[i], cfg.p_floor) && !at_upper(out.p[i], p_u[i])) {
        slope += 1.0 / utility_hess(out.p[i], sc.users[i], sc.delta[i]);
      }
      sum += out.p[i];
    }
    return sum - sc.p_sum_max;
  };

  double slope = 0.0;
  double lo = 0.0;
  if (evaluate(lo, slope) <= 0.0) {
    out.lambda = 0.0;
    return out;
  }
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    hi = std::max(hi, utility_grad(cfg.p_floor, sc.users[i], sc.delta[i]));
  }

  double price = std::clamp(warm_lambda, lo, hi);
  if (price <= lo || price >= hi) price = 0.5 * (lo + hi);
  const double tol = 1e-14 * sc.p_sum_max;
  for (int it = 0; it < 500; ++it) {
    const double excess = evaluate(price, slope);
    if (std::abs(excess) <= tol) break;
    if (excess > 0.0) {
      lo = price;
    } else {
      hi = price;
    }
    if (hi - lo <= 4.0 * kEps * hi) break;
    double next = slope < 0.0 ? price - excess / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    price = next;
  }
  evaluate(price, slope);
  out.lambda = price;
  return out;
}

}  // namespace

void SolverSettings::validate() const {
  if (!(tol_root > 0.0 && tol_kkt > 0.0 && tol_step > 0.0)) {
    throw DomainError("solver tolerances must be > 0");
  }
  if (max_iter <= 0) throw DomainError("solver max_iter must be positive");
  if (!(gp_step > 0.0)) throw DomainError("gradient projection step must be > 0");
  if (!(p_floor > 0.0)) throw DomainError("power floor must be > 0");
}

void Scenario::validate() const {
  if (users.empty()) throw DimensionError("scenario needs at least one user");
  if (delta.size() != users.size()) {
    throw DimensionError(fmt::format("scenario has {} users but {} effective gains",
                                     users.size(), delta.size()));
  }
  settings.validate();
  for (std::size_t i = 0; i < users.size(); ++i) {
    try {
      users[i].validate();
    } catch (const DomainError& e) {
      throw DomainError(fmt::format("user {}: {}", i + 1, e.what()));
    }
    if (!(users[i].p_max > settings.p_floor)) {
      throw DomainError(fmt::format("user {}: power cap is below the numeric floor", i + 1));
    }
  }
  if (!(p_sum_max > 0.0) || !std::isfinite(p_sum_max)) {
    throw DomainError("power budget must be finite and > 0");
  }
  if (!(p_sum_max > static_cast<double>(users.size()) * settings.p_floor)) {
    throw DomainError("power budget is below N times the numeric floor");
  }
}

std::string_view to_string(BudgetCase c) noexcept {
  return c == BudgetCase::SumSlack ? "SumSlack" : "SumTight";
}

double KktReport::max_stationarity() const {
  double m = 0.0;
  for (const double s : stationarity) m = std::max(m, s);
  return m;
}

double KktReport::max_residual() const {
  double m = std::max({max_stationarity(), slackness_sum, box_gap, sum_gap, dual_gap});
  for (const double s : slackness_lower) m = std::max(m, s);
  for (const double s : slackness_upper) m = std::max(m, s);
  return m;
}

double compute_pu(const UserParams& user, double delta, const SolverSettings& settings) {
  user.validate();
  settings.validate();
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw DomainError("effective gain must be finite and > 0");
  }

  const double target = 1.0 - user.w;
  const double excess_at_cap = beta(user.p_max, user, delta) - target;
  // excess == 0 is the root branch with the root exactly at the cap.
  if (excess_at_cap >= 0.0) return user.p_max;

  // beta - target is strictly decreasing, positive near 0 and <= 0 at the cap.
  double lo = settings.p_floor;
  double hi = user.p_max;
  double p = 0.5 * user.p_max;
  for (std::int64_t it = 0; it < settings.max_iter; ++it) {
    const double excess = beta(p, user, delta) - target;
    if (std::abs(excess) <= settings.tol_root) return p;
    if (excess > 0.0) {
      lo = p;
    } else {
      hi = p;
    }
    if (hi - lo <= 2.0 * kEps * hi) break;
    double next = p - excess / beta_prime(p, user, delta);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    p = next;
  }
  throw NonConvergenceError(fmt::format(
      "root of beta(P) = {:.17g} not resolved to {:g} (bracket [{:.17g}, {:.17g}])", target,
      settings.tol_root, lo, hi));
}

double total_utility(const Scenario& sc, std::span<const double> p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sc.size(); ++i) sum += utility(p[i], sc.users[i], sc.delta[i]);
  return sum;
}

KktReport kkt_residuals(const Scenario& sc, const Allocation& alloc) {
  const std::size_t n = sc.size();
  if (alloc.p.size() != n || alloc.p_u.size() != n) {
    throw DimensionError("allocation size does not match scenario");
  }
  const double floor = sc.settings.p_floor;

  KktReport r;
  r.mu.assign(n, 0.0);
  r.nu.assign(n, 0.0);
  r.stationarity.assign(n, 0.0);
  r.slackness_lower.assign(n, 0.0);
  r.slackness_upper.assign(n, 0.0);

  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = alloc.p[i];
    const double cap = alloc.p_u[i];
    sum += p;
    r.box_gap = std::max({r.box_gap, floor - p, p - cap});

    const double grad = utility_grad(std::max(p, floor), sc.users[i], sc.delta[i]);
    if (at_lower(p, floor)) r.mu[i] = std::max(0.0, alloc.lambda - grad);
    if (at_upper(p, cap)) r.nu[i] = std::max(0.0, grad - alloc.lambda);
    r.stationarity[i] = std::abs(grad + r.mu[i] - r.nu[i] - alloc.lambda);
    r.slackness_lower[i] = std::abs(r.mu[i] * (p - floor));
    r.slackness_upper[i] = std::abs(r.nu[i] * (p - cap));
  }
  r.box_gap = std::max(0.0, r.box_gap);
  r.sum_gap = std::max(0.0, sum - sc.p_sum_max);
  r.slackness_sum = std::abs(alloc.lambda * (sum - sc.p_sum_max));
  r.dual_gap = std::max(0.0, -alloc.lambda);
  return r;
}

Allocation solve_centralized(const Scenario& sc) {
  sc.validate();
  const std::size_t n = sc.size();

  Allocation a;
  a.p_u.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.p_u[i] = compute_pu(sc.users[i], sc.delta[i], sc.settings);
  }

  const double pu_sum = std::accumulate(a.p_u.begin(), a.p_u.end(), 0.0);
  if (pu_sum <= sc.p_sum_max) {
    a.p = a.p_u;
    a.lambda = 0.0;
    a.budget_case = BudgetCase::SumSlack;
  } else {
    a.budget_case = BudgetCase::SumTight;
    auto gp = gradient_projection(sc, a.p_u);
    auto polished = polish_on_budget(sc, a.p_u, gp.p, gp.lambda);
    a.diagnostics.gp_iterations = gp.iterations;
    a.diagnostics.gp_backtracks = gp.backtracks;
    a.diagnostics.polish_shift = inf_norm_diff(polished.p, gp.p);
    a.diagnostics.gp_trace = std::move(gp.trace);
    a.p = std::move(polished.p);
    a.lambda = polished.lambda;
  }

  auto& d = a.diagnostics;
  d.se.resize(n);
  d.ee.resize(n);
  d.utility.resize(n);
  d.total_utility = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d.se[i] = se(a.p[i], sc.delta[i]);
    d.ee[i] = ee(a.p[i], sc.users[i], sc.delta[i]);
    d.utility[i] = utility(a.p[i], sc.users[i], sc.delta[i]);
    d.total_utility += d.utility[i];
  }
  d.kkt = kkt_residuals(sc, a);
  if (a.budget_case == BudgetCase::SumTight) {
    const double sum = std::accumulate(a.p.begin(), a.p.end(), 0.0);
    if (std::abs(sum - sc.p_sum_max) > sc.settings.tol_kkt) {
      throw NonConvergenceError("binding budget not met within tol_kkt");
    }
  }
  if (d.kkt.max_residual() > sc.settings.tol_kkt) {
    throw NonConvergenceError(fmt::format("KKT certification failed: max residual {:.3e} > {:g}",
                                          d.kkt.max_residual(), sc.settings.tol_kkt));
  }
  return a;
}

}  // namespace mupa
