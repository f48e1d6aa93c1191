// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include "mupa/utility.hpp"

#include <cmath>
#include <string>

#include "mupa/errors.hpp"

namespace mupa {

namespace {

void require_nonnegative(double p, const char* what) {
  if (!(p >= 0.0)) throw DomainError(std::string(what) + ": power must be >= 0");
}

void require_positive(double p, const char* what) {
  if (!(p > 0.0)) throw DomainError(std::string(what) + ": power must be > 0");
}

// log1p keeps ln(1 + x) accurate when delta * p is far below machine epsilon.
double log_gain(double p, double delta) { return std::log1p(delta * p); }

}  // namespace

void UserParams::validate() const {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError("preference weight w = " + std::to_string(w) + " is outside [0, 1]");
  }
  if (!(p_circuit > 0.0) || !std::isfinite(p_circuit)) {
    throw DomainError("circuit power must be finite and > 0");
  }
  if (!(p_max > 0.0) || !std::isfinite(p_max)) {
    throw DomainError("individual power cap must be finite and > 0");
  }
}

double se(double p, double delta) {
  require_nonnegative(p, "se");
  return log_gain(p, delta);
}

double ee(double p, const UserParams& user, double delta) {
  require_nonnegative(p, "ee");
  return log_gain(p, delta) / (p + user.p_circuit);
}

double utility(double p, const UserParams& user, double delta) {
  require_positive(p, "utility");
  return std::log(log_gain(p, delta)) - (1.0 - user.w) * std::log(p + user.p_circuit);
}

double composite_utility(double p, const UserParams& user, double delta) {
  return std::exp(utility(p, user, delta));
}

double beta(double p, const UserParams& user, double delta) {
  require_positive(p, "beta");
  const double lg = log_gain(p, delta);
  return delta * (p + user.p_circuit) / ((1.0 + delta * p) * lg);
}

double beta_prime(double p, const UserParams& user, double delta) {
  require_positive(p, "beta_prime");
  const double dp = delta * p;
  const double lg = log_gain(p, delta);
  const double denom = (1.0 + dp) * lg;
  // lg - dp loses all digits when dp is tiny; use its series there.
  const double lg_minus_dp =
      dp < 1e-4 ? dp * dp * (-0.5 + dp * (1.0 / 3.0 - 0.25 * dp)) : lg - dp;
  return delta * (lg_minus_dp - user.p_circuit * delta * (lg + 1.0)) / (denom * denom);
}

double utility_grad(double p, const UserParams& user, double delta) {
  require_positive(p, "utility_grad");
  return (beta(p, user, delta) - (1.0 - user.w)) / (p + user.p_circuit);
}

double utility_hess(double p, const UserParams& user, double delta) {
  require_positive(p, "utility_hess");
  const double total = p + user.p_circuit;
  const double excess = beta(p, user, delta) - (1.0 - user.w);
  return (beta_prime(p, user, delta) * total - excess) / (total * total);
}

}  // namespace mupa
