// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "mupa/primal_dual.hpp"
#include "mupa/solver.hpp"

namespace mupa {

enum class GainSource { DeltaDb, ChannelCsv, Rayleigh };

/// A scenario file resolved into solver inputs.
///
/// The file is a flat YAML mapping. Units live in the key names:
///
///   n_users: 2
///   receive_antennas: 2            # optional, defaults to n_users
///   delta_db: [20, 20]             # exactly one gain source:
///   # channel_csv: h.csv           #   CSV matrix (path relative to the file)
///   # channel_rayleigh: true       #   i.i.d. CN(0,1) matrix from `seed`
///   # sigma2_watts: 1.0            #   required with either channel source
///   w: [0.5, 0.5]                  # scalar values broadcast to all users
///   p_max_individual_watts: 1.0
///   p_circuit_watts: 0.1
///   p_sum_max_watts: 1.5
///   seed: 7
///
/// Optional overrides: solver_tol_root, solver_tol_kkt, solver_tol_step,
/// solver_max_iter, solver_gp_step, solver_p_floor_watts, pd_gain_primal,
/// pd_gain_dual, pd_init_p_watts, pd_init_lambda, pd_tol_eq, pd_max_steps,
/// pd_record_every. Unknown keys are rejected.
struct LoadedScenario {
  Scenario scenario;
  PdSettings pd;
  std::size_t receive_antennas = 0;
  GainSource source = GainSource::DeltaDb;
  std::optional<std::uint64_t> seed;
};

/// Throws ParseError for syntax, missing or unknown keys; DomainError,
/// DimensionError or SingularGramError for invariant violations.
[[nodiscard]] LoadedScenario parse_scenario(std::string_view text,
                                            const std::filesystem::path& base_dir,
                                            std::optional<std::uint64_t> seed_override = {});

[[nodiscard]] LoadedScenario load_scenario(const std::filesystem::path& path,
                                           std::optional<std::uint64_t> seed_override = {});

}  // namespace mupa
