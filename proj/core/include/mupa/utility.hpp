// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace mupa {

/// Per-user preference and power parameters.
struct UserParams {
  double w = 0.5;          ///< SE weight in [0, 1]; 1 - w weights EE.
  double p_circuit = 0.1;  ///< Circuit power, W (> 0).
  double p_max = 1.0;      ///< Individual transmit cap, W (> 0).

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

// Per-user spectral/energy efficiency and the proportional-fair log utility.
// All logarithms are natural, so SE is in nats/s/Hz and EE in nats/J/Hz.
// Functions taking a `delta` expect the linear effective gain (1/W, > 0).

/// ln(1 + delta p). Requires p >= 0.
[[nodiscard]] double se(double p, double delta);

/// se / (p + p_circuit). Requires p >= 0.
[[nodiscard]] double ee(double p, const UserParams& user, double delta);

/// ln(ln(1 + delta p)) - (1 - w) ln(p + p_circuit). Requires p > 0.
[[nodiscard]] double utility(double p, const UserParams& user, double delta);

/// (SE)^w (EE)^(1-w) = exp(utility). Requires p > 0.
[[nodiscard]] double composite_utility(double p, const UserParams& user, double delta);

/// delta (p + p_circuit) / ((1 + delta p) ln(1 + delta p)).
///
/// Strictly decreasing from +inf at p -> 0+. The stationary point of the
/// utility is the level set beta = 1 - w. Requires p > 0.
[[nodiscard]] double beta(double p, const UserParams& user, double delta);

/// d beta / d p, closed form; negative everywhere on p > 0.
[[nodiscard]] double beta_prime(double p, const UserParams& user, double delta);

/// dU/dp = (beta - (1 - w)) / (p + p_circuit). Requires p > 0.
[[nodiscard]] double utility_grad(double p, const UserParams& user, double delta);

/// d2U/dp2 = (beta' (p + p_circuit) - (beta - (1 - w))) / (p + p_circuit)^2.
[[nodiscard]] double utility_hess(double p, const UserParams& user, double delta);

}  // namespace mupa
