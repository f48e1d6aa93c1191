// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <numeric>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "mupa/channel.hpp"
#include "mupa/primal_dual.hpp"
#include "mupa/solver.hpp"

namespace {

using namespace mupa;

Scenario four_users(double budget) {
  std::vector<UserParams> users(4);
  const std::array w{0.0, 0.3, 0.7, 1.0};
  for (std::size_t i = 0; i < 4; ++i) users[i].w = w[i];
  return Scenario{users, EffectiveGains({100.0, 100.0, 100.0, 100.0}), budget, {}};
}

void BM_ComputePu(benchmark::State& state) {
  UserParams u;
  u.w = 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(compute_pu(u, 100.0));
}
BENCHMARK(BM_ComputePu);

void BM_ProjectCappedSimplex(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> y(n);
  std::vector<double> caps(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = 2.0 * unit(rng) - 0.5;
    caps[i] = 0.1 + unit(rng);
  }
  const double total = 0.5 * std::accumulate(caps.begin(), caps.end(), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_capped_simplex(y, caps, total, 1e-9));
  }
}
BENCHMARK(BM_ProjectCappedSimplex)->Arg(2)->Arg(16)->Arg(256);

void BM_SolveSlack(benchmark::State& state) {
  const auto sc = four_users(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_centralized(sc));
}
BENCHMARK(BM_SolveSlack);

void BM_SolveTight(benchmark::State& state) {
  const auto sc = four_users(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_centralized(sc));
}
BENCHMARK(BM_SolveTight)->Unit(benchmark::kMillisecond);

void BM_PrimalDualStep(benchmark::State& state) {
  const auto sc = four_users(1.0);
  const auto a = solve_centralized(sc);
  const auto cfg = PdSettings::defaults(4);
  PdState s{a.p_u, 0.0};
  for (auto& p : s.p) p *= 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(step(s, sc, a.p_u, cfg));
}
BENCHMARK(BM_PrimalDualStep);

void BM_Integrate(benchmark::State& state) {
  const auto sc = four_users(1.0);
  auto cfg = PdSettings::defaults(4);
  cfg.record_every = 1'000'000;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(sc, cfg));
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);

void BM_EffectiveGains(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const ChannelRealization ch(rayleigh_channel(m, m / 2, 7), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(compute_effective_gains(ch));
}
BENCHMARK(BM_EffectiveGains)->Arg(4)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
