// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mupa/errors.hpp"
#include "mupa/metrics.hpp"
#include "mupa/solver.hpp"

namespace mupa {
namespace {

UserParams params(double w) {
  UserParams u;
  u.w = w;
  return u;
}

TEST(JainIndex, EqualUtilitiesGiveOne) {
  for (const double c : {-50.0, 0.0, 1.3, 700.0}) {
    const std::array u{c, c};
    EXPECT_DOUBLE_EQ(jain_index(u), 1.0);
  }
}

TEST(JainIndex, ArithmeticExample) {
  const std::array u{0.0, std::log(3.0)};
  EXPECT_NEAR(jain_index(u), 0.8, 1e-15);
}

TEST(JainIndex, DominantUserApproachesLowerBound) {
  const std::array u{0.0, std::log(1e6)};
  const double j = jain_index(u);
  EXPECT_LE(j, 0.500001);
  EXPECT_GE(j, 0.5);
}

TEST(JainIndex, PermutationInvariant) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> u(6);
    for (auto& x : u) x = normal(rng);
    const double base = jain_index(u);
    std::shuffle(u.begin(), u.end(), rng);
    EXPECT_NEAR(jain_index(u), base, 1e-15);
  }
}

TEST(JainIndex, UniformShiftInvariant) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> u(4);
    for (auto& x : u) x = normal(rng);
    const double base = jain_index(u);
    for (const double c : {-300.0, -1.0, 2.5, 400.0}) {
      std::vector<double> shifted = u;
      for (auto& x : shifted) x += c;
      EXPECT_NEAR(jain_index(shifted), base, 1e-12);
    }
    EXPECT_GE(base, 0.25);
    EXPECT_LE(base, 1.0);
  }
}

TEST(Summarize, AsymmetricGainsReference) {
  const Scenario sc{{params(0.5), params(0.5)}, gains_from_db(std::array{-20.0, 20.0}), 1.5, {}};
  const auto a = solve_centralized(sc);
  const auto f = summarize(sc, a);
  EXPECT_NEAR(f.jain, 0.50170496812232611, 1e-12);
  EXPECT_NEAR(f.jain, 0.5017, 1e-3);
}

TEST(Summarize, SymmetricAllocationIsPerfectlyFair) {
  for (const double db : {-20.0, 0.0, 20.0}) {
    const Scenario sc{{params(0.5), params(0.5)}, gains_from_db(std::array{db, db}), 1.5, {}};
    const auto f = summarize(sc, solve_centralized(sc));
    EXPECT_NEAR(f.jain, 1.0, 1e-12);
    EXPECT_EQ(f.per_user_utility[0], f.per_user_utility[1]);
  }
}

TEST(Summarize, MatchesRecomputationFromPowers) {
  const Scenario sc{{params(0.3), params(0.8)}, EffectiveGains({10.0, 100.0}), 0.8, {}};
  const auto a = solve_centralized(sc);
  const auto f = summarize(sc, a.p);
  double total = 0.0;
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const double s_e = std::log(1.0 + sc.delta[i] * a.p[i]);
    const double e_e = s_e / (a.p[i] + sc.users[i].p_circuit);
    const double u = sc.users[i].w * std::log(s_e) + (1.0 - sc.users[i].w) * std::log(e_e);
    EXPECT_NEAR(f.per_user_utility[i], u, 1e-12);
    EXPECT_NEAR(f.per_user_exp_utility[i], std::pow(s_e, sc.users[i].w) *
                                               std::pow(e_e, 1.0 - sc.users[i].w),
                1e-12);
    total += u;
    s += std::exp(u);
    s2 += std::exp(2.0 * u);
  }
  EXPECT_NEAR(f.total_utility, total, 1e-12);
  EXPECT_NEAR(f.jain, s * s / (2.0 * s2), 1e-12);
}

TEST(Summarize, RejectsNonPositivePower) {
  const Scenario sc{{params(0.3), params(0.8)}, EffectiveGains({10.0, 100.0}), 0.8, {}};
  const std::array p{0.0, 0.5};
  EXPECT_THROW((void)summarize(sc, p), DomainError);
}

}  // namespace
}  // namespace mupa
