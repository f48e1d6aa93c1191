// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mupa/errors.hpp"
#include "mupa/primal_dual.hpp"
#include "mupa/solver.hpp"

namespace mupa {
namespace {

UserParams params(double w, double pc = 0.1, double pmax = 1.0) {
  UserParams u;
  u.w = w;
  u.p_circuit = pc;
  u.p_max = pmax;
  return u;
}

Scenario make_scenario(std::vector<UserParams> users, std::vector<double> delta,
                       double budget) {
  return Scenario{std::move(users), EffectiveGains(std::move(delta)), budget, {}};
}

Scenario heterogeneous() {
  return make_scenario({params(0.3), params(0.8)}, {10.0, 100.0}, 0.8);
}

double inf_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(ClampPlus, Branches) {
  EXPECT_EQ(clamp_plus(-1.0, 0.0), 0.0);
  EXPECT_EQ(clamp_plus(-1.0, 0.5), -1.0);
  EXPECT_EQ(clamp_plus(2.0, -3.0), 2.0);
}

TEST(ClampBox, Branches) {
  EXPECT_EQ(clamp_box(1.0, 1.0, 1.0), 0.0);
  EXPECT_EQ(clamp_box(-1.0, 1.0, 1.0), -1.0);
  EXPECT_EQ(clamp_box(-2.0, 0.0, 1.0), 0.0);
  EXPECT_EQ(clamp_box(2.0, 0.0, 1.0), 2.0);
  EXPECT_EQ(clamp_box(0.3, 0.5, 1.0), 0.3);
}

TEST(Step, InteriorMotionIsScaledDrive) {
  const auto sc = heterogeneous();
  const std::vector<double> p_u{0.31727338835980962, 1.0};
  auto cfg = PdSettings::defaults(2);
  cfg.k = {2e-3, 5e-4};
  const PdState s{{0.2, 0.4}, 0.1};
  const auto next = step(s, sc, p_u, cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    const double drive = utility_grad(s.p[i], sc.users[i], sc.delta[i]) - s.lambda;
    EXPECT_NEAR(next.p[i], s.p[i] + cfg.k[i] * drive, 1e-16);
  }
  EXPECT_NEAR(next.lambda, 0.1 + 1e-3 * (0.6 - 0.8), 1e-17);
}

TEST(Step, PriceStaysAtZeroUnderSlackBudget) {
  const auto sc = heterogeneous();
  const std::vector<double> p_u{0.31727338835980962, 1.0};
  const PdState s{{0.1, 0.1}, 0.0};
  EXPECT_EQ(step(s, sc, p_u, PdSettings::defaults(2)).lambda, 0.0);
}

TEST(Step, CentralizedOptimumIsEquilibrium) {
  const auto sc = heterogeneous();
  const auto a = solve_centralized(sc);
  const auto cfg = PdSettings::defaults(2);
  const PdState s{a.p, a.lambda};
  const auto next = step(s, sc, a.p_u, cfg);
  EXPECT_LE(inf_gap(next.p, a.p), cfg.tol_eq);
  EXPECT_LE(std::abs(next.lambda - a.lambda), cfg.tol_eq);
}

TEST(Step, OverflowIsReported) {
  const auto sc = make_scenario({params(1.0, 0.1, 5.0), params(1.0, 0.1, 5.0)},
                                {100.0, 100.0}, 1.0);
  auto cfg = PdSettings::defaults(2);
  cfg.g = 1e308;
  const std::vector<double> p_u{5.0, 5.0};
  const PdState s{{5.0, 5.0}, 0.0};
  EXPECT_THROW((void)step(s, sc, p_u, cfg), NumericOverflowError);

  cfg.init_p = {5.0, 5.0};
  EXPECT_THROW((void)integrate(sc, cfg), NumericOverflowError);
}

TEST(Lyapunov, ReferenceValues) {
  const Equilibrium ref{{0.3, 0.5}, 0.2};
  const auto cfg = PdSettings::defaults(2);
  EXPECT_EQ(lyapunov(ref.p, ref.lambda, ref, cfg), 0.0);
  const std::vector<double> p{0.4, 0.5};
  EXPECT_NEAR(lyapunov(p, ref.lambda, ref, cfg), 5.0, 1e-12);
  EXPECT_NEAR(lyapunov(ref.p, 0.3, ref, cfg), 5.0, 1e-12);
}

TEST(Integrate, SingleFullSeUserRisesToCap) {
  const auto sc = make_scenario({params(1.0)}, {100.0}, 5.0);
  auto cfg = PdSettings::defaults(1);
  cfg.k = {0.05};
  const auto traj = integrate(sc, cfg);
  ASSERT_TRUE(traj.converged);
  EXPECT_EQ(traj.final_state.p[0], 1.0);
  for (const auto& r : traj.records) EXPECT_EQ(r.lambda, 0.0);
}

TEST(Integrate, SymmetricUsersStayEqual) {
  const auto sc = make_scenario({params(1.0), params(1.0)}, {100.0, 100.0}, 1.5);
  auto cfg = PdSettings::defaults(2);
  cfg.init_p = {0.3, 0.3};
  cfg.record_every = 1;
  cfg.max_steps = 20000;
  const auto traj = integrate(sc, cfg);
  for (const auto& r : traj.records) EXPECT_LE(std::abs(r.p[0] - r.p[1]), 1e-9);
}

TEST(Integrate, BoxInvarianceAndMessageCounts) {
  const auto sc = heterogeneous();
  const auto a = solve_centralized(sc);
  auto cfg = PdSettings::defaults(2);
  cfg.record_every = 7;
  const auto traj = integrate(sc, cfg, Equilibrium::from(a));
  ASSERT_TRUE(traj.converged);
  for (const auto& r : traj.records) {
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_GE(r.p[i], sc.settings.p_floor);
      EXPECT_LE(r.p[i], traj.p_u[i]);
    }
    EXPECT_GE(r.lambda, 0.0);
  }
  EXPECT_EQ(traj.messages_broadcast, traj.steps);
  EXPECT_EQ(traj.messages_uplink, 2 * traj.steps);
  EXPECT_EQ(traj.records.front().t, 0);
  EXPECT_EQ(traj.records.back().t, traj.steps);
  EXPECT_LE(inf_gap(traj.final_state.p, a.p), 1e-3);
}

TEST(Integrate, LyapunovDescends) {
  const auto sc = heterogeneous();
  const auto a = solve_centralized(sc);
  auto cfg = PdSettings::defaults(2);
  cfg.record_every = 1;
  cfg.init_lambda = 0.7;
  const auto traj = integrate(sc, cfg, Equilibrium::from(a));
  ASSERT_GT(traj.records.size(), 100u);
  for (std::size_t k = 1; k < traj.records.size(); ++k) {
    const double prev = traj.records[k - 1].lyapunov;
    EXPECT_LE(traj.records[k].lyapunov, prev + 1e-6 * std::max(1.0, prev)) << "t=" << k;
  }
}

TEST(Integrate, RandomStartsReachCentralizedOptimum) {
  const auto sc = make_scenario({params(0.0), params(0.3), params(0.7), params(1.0)},
                                {100.0, 100.0, 100.0, 100.0}, 1.0);
  const auto a = solve_centralized(sc);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto cfg = PdSettings::defaults(4);
    cfg.init_p.resize(4);
    for (std::size_t i = 0; i < 4; ++i) cfg.init_p[i] = a.p_u[i] * (1e-3 + 0.999 * unit(rng));
    cfg.init_lambda = unit(rng);
    cfg.record_every = 1000;
    const auto traj = integrate(sc, cfg);
    ASSERT_TRUE(traj.converged) << "trial " << trial;
    EXPECT_LE(inf_gap(traj.final_state.p, a.p), 1e-3) << "trial " << trial;
  }
}

TEST(Integrate, RestartFromFinalStateStaysPut) {
  const auto sc = heterogeneous();
  auto cfg = PdSettings::defaults(2);
  const auto traj = integrate(sc, cfg);
  ASSERT_TRUE(traj.converged);

  PdState s = traj.final_state;
  for (int k = 0; k < 10; ++k) {
    const auto next = step(s, sc, traj.p_u, cfg);
    EXPECT_LE(inf_gap(next.p, s.p), cfg.tol_eq);
    EXPECT_LE(std::abs(next.lambda - s.lambda), cfg.tol_eq);
    s = next;
  }
}

TEST(Integrate, StepBudgetExhaustionIsAFlag) {
  const auto sc = heterogeneous();
  auto cfg = PdSettings::defaults(2);
  cfg.max_steps = 10;
  const auto traj = integrate(sc, cfg);
  EXPECT_FALSE(traj.converged);
  EXPECT_EQ(traj.steps, 10);
  EXPECT_EQ(traj.records.back().t, 10);
}

TEST(Integrate, RejectsBadSettings) {
  const auto sc = heterogeneous();
  auto cfg = PdSettings::defaults(2);
  cfg.init_p = {0.5, 0.5};  // user 1 cap is about 0.317
  EXPECT_THROW((void)integrate(sc, cfg), DomainError);
  cfg = PdSettings::defaults(3);
  EXPECT_THROW((void)integrate(sc, cfg), DimensionError);
  cfg = PdSettings::defaults(2);
  cfg.g = 0.0;
  EXPECT_THROW((void)integrate(sc, cfg), DomainError);
}

}  // namespace
}  // namespace mupa
