// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include "mupa/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mupa/errors.hpp"

namespace mupa {

double jain_index(std::span<const double> utilities) {
  if (utilities.empty()) throw DimensionError("Jain index of an empty set");
  const double top = *std::max_element(utilities.begin(), utilities.end());
  if (!std::isfinite(top)) throw DomainError("Jain index needs finite utilities");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const double u : utilities) {
    if (!std::isfinite(u)) throw DomainError("Jain index needs finite utilities");
    const double x = std::exp(u - top);
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(utilities.size());
  return std::clamp(sum * sum / (n * sum_sq), 1.0 / n, 1.0);
}

FairnessReport summarize(const Scenario& sc, std::span<const double> p) {
  if (p.size() != sc.size()) throw DimensionError("allocation size does not match scenario");
  FairnessReport r;
  r.per_user_utility.resize(p.size());
  r.per_user_exp_utility.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    r.per_user_utility[i] = utility(p[i], sc.users[i], sc.delta[i]);
    r.per_user_exp_utility[i] = std::exp(r.per_user_utility[i]);
    r.total_utility += r.per_user_utility[i];
  }
  r.jain = jain_index(r.per_user_utility);
  return r;
}

FairnessReport summarize(const Scenario& sc, const Allocation& alloc) {
  return summarize(sc, alloc.p);
}

}  // namespace mupa
