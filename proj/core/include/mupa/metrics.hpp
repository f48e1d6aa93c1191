// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "mupa/solver.hpp"

namespace mupa {

struct FairnessReport {
  double jain = 1.0;  ///< in [1/N, 1]
  std::vector<double> per_user_utility;
  std::vector<double> per_user_exp_utility;
  double total_utility = 0.0;
};

/// Jain's index over exp(U_i): (sum e^U)^2 / (N sum e^{2U}).
///
/// Invariant under a common shift of all U_i, which is used to evaluate it
/// relative to max U_i so large utilities cannot overflow.
[[nodiscard]] double jain_index(std::span<const double> utilities);

[[nodiscard]] FairnessReport summarize(const Scenario& sc, std::span<const double> p);
[[nodiscard]] FairnessReport summarize(const Scenario& sc, const Allocation& alloc);

}  // namespace mupa
