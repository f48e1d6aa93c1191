// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mupa/channel.hpp"
#include "mupa/errors.hpp"
#include "oracles.hpp"

namespace mupa {
namespace {

void expect_relative(double actual, double expected, double tol) {
  EXPECT_LE(std::abs(actual - expected), tol * std::abs(expected))
      << "actual " << actual << " expected " << expected;
}

TEST(EffectiveGains, IdentityChannelGivesUnitGains) {
  const ChannelRealization ch(ComplexMatrix::Identity(2, 2), 1.0);
  const auto g = compute_effective_gains(ch);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_DOUBLE_EQ(g[0], 1.0);
  EXPECT_DOUBLE_EQ(g[1], 1.0);
}

TEST(EffectiveGains, OrthogonalColumnsGiveSquaredNorms) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 2.0;
  h(1, 1) = 3.0;
  const auto g = compute_effective_gains(ChannelRealization(h, 1.0));
  EXPECT_NEAR(g[0], 4.0, 1e-14);
  EXPECT_NEAR(g[1], 9.0, 1e-14);
}

TEST(EffectiveGains, NoisePowerDividesGains) {
  const auto g = compute_effective_gains(ChannelRealization(ComplexMatrix::Identity(3, 2), 0.25));
  EXPECT_NEAR(g[0], 4.0, 1e-14);
  EXPECT_NEAR(g[1], 4.0, 1e-14);
}

TEST(EffectiveGains, MatchesPseudoInverseRowNorms) {
  const ComplexMatrix h = rayleigh_channel(4, 2, 12345);
  const auto g = compute_effective_gains(ChannelRealization(h, 0.5));
  const auto expected = oracle::pinv_row_norm_gains(h, 0.5);
  for (std::size_t i = 0; i < 2; ++i) expect_relative(g[i], expected[i], 1e-8);
}

TEST(EffectiveGains, PseudoInverseOracleHoldsAcrossSizes) {
  std::uint64_t seed = 1000;
  for (const std::size_t m : {2u, 4u, 8u}) {
    for (const std::size_t n : {2u, 4u}) {
      if (m < n) continue;
      for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix h = rayleigh_channel(m, n, ++seed);
        // Near-singular draws are legitimately rejected; skip them.
        if (gram_condition_number(h) > kMaxGramCondition) continue;
        const auto g = compute_effective_gains(ChannelRealization(h, 1.0));
        const auto expected = oracle::pinv_row_norm_gains(h, 1.0);
        for (std::size_t i = 0; i < n; ++i) expect_relative(g[i], expected[i], 1e-8);
      }
    }
  }
}

TEST(EffectiveGains, InvariantUnderUnitaryRotation) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const ComplexMatrix h = rayleigh_channel(4, 3, seed);
    const ComplexMatrix q = oracle::random_unitary(4, seed + 500);
    const auto g = compute_effective_gains(ChannelRealization(h, 1.0));
    const auto gq = compute_effective_gains(ChannelRealization(q * h, 1.0));
    for (std::size_t i = 0; i < 3; ++i) expect_relative(gq[i], g[i], 1e-10);
  }
}

TEST(EffectiveGains, ScalesQuadraticallyWithChannel) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const ComplexMatrix h = rayleigh_channel(4, 2, seed);
    const double c = 0.1 + 0.3 * static_cast<double>(seed);
    const auto g = compute_effective_gains(ChannelRealization(h, 1.0));
    const auto gc = compute_effective_gains(ChannelRealization(c * h, 1.0));
    for (std::size_t i = 0; i < 2; ++i) expect_relative(gc[i], c * c * g[i], 1e-10);
  }
}

TEST(ChannelRealization, RejectsFewerAntennasThanUsers) {
  EXPECT_THROW(ChannelRealization(ComplexMatrix::Identity(2, 3), 1.0), DimensionError);
}

TEST(ChannelRealization, RejectsRankDeficientChannel) {
  ComplexMatrix h = rayleigh_channel(4, 2, 3);
  h.col(1) = h.col(0) * std::complex<double>(0.0, 2.0);
  EXPECT_THROW(ChannelRealization(h, 1.0), SingularGramError);
}

TEST(ChannelRealization, RejectsNonPositiveNoise) {
  EXPECT_THROW(ChannelRealization(ComplexMatrix::Identity(2, 2), 0.0), DomainError);
}

TEST(GainsFromDb, ConvertsPowerDecibels) {
  const std::array db{20.0, 20.0, 0.0, -20.0};
  const auto g = gains_from_db(db);
  EXPECT_NEAR(g[0], 100.0, 1e-12);
  EXPECT_NEAR(g[1], 100.0, 1e-12);
  EXPECT_DOUBLE_EQ(g[2], 1.0);
  EXPECT_NEAR(g[3], 0.01, 1e-16);
}

TEST(GainsFromDb, RejectsNonFinite) {
  const std::array db{std::nan("")};
  EXPECT_THROW((void)gains_from_db(db), DomainError);
}

TEST(RayleighChannel, IsDeterministicPerSeed) {
  EXPECT_EQ(rayleigh_channel(3, 2, 9), rayleigh_channel(3, 2, 9));
  EXPECT_NE(rayleigh_channel(3, 2, 9), rayleigh_channel(3, 2, 10));
}

TEST(ChannelCsv, ParsesComplexLiterals) {
  std::istringstream in("# antenna rows\n1+2j, -0.5-1e-1j\n3, 4j\n-2.5e+0+0j,-j\n");
  const auto h = read_channel_csv(in, 2);
  ASSERT_EQ(h.rows(), 3);
  EXPECT_EQ(h(0, 0), std::complex<double>(1.0, 2.0));
  EXPECT_EQ(h(0, 1), std::complex<double>(-0.5, -0.1));
  EXPECT_EQ(h(1, 0), std::complex<double>(3.0, 0.0));
  EXPECT_EQ(h(1, 1), std::complex<double>(0.0, 4.0));
  EXPECT_EQ(h(2, 0), std::complex<double>(-2.5, 0.0));
  EXPECT_EQ(h(2, 1), std::complex<double>(0.0, -1.0));
}

TEST(ChannelCsv, ParsesRealImaginaryPairs) {
  std::istringstream in("1,2,3,4\n5,6,7,8\n");
  const auto h = read_channel_csv(in, 2);
  EXPECT_EQ(h(1, 1), std::complex<double>(7.0, 8.0));
  EXPECT_EQ(h(0, 0), std::complex<double>(1.0, 2.0));
}

TEST(ChannelCsv, RejectsWrongColumnCount) {
  std::istringstream in("1,2,3\n");
  EXPECT_THROW((void)read_channel_csv(in, 2), ParseError);
}

TEST(ChannelCsv, RejectsGarbage) {
  std::istringstream in("1+2j,abc\n");
  EXPECT_THROW((void)read_channel_csv(in, 2), ParseError);
}

}  // namespace
}  // namespace mupa
