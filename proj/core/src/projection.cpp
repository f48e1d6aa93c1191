// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mupa/errors.hpp"
#include "mupa/solver.hpp"

namespace mupa {

namespace {

double clamped_sum(std::span<const double> y, std::span<const double> caps, double floor,
                   double shift) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::clamp(y[i] - shift, floor, caps[i]);
  return s;
}

}  // namespace

// x_i(mu) = clamp(y_i - mu, floor, cap_i) is piecewise linear and non-increasing
// in mu, with kinks at y_i - cap_i and y_i - floor. Binary search over the
// sorted kinks brackets the crossing of sum x = total; the crossing piece is
// linear, so mu follows by interpolation without further iteration.
CappedSimplexProjection project_capped_simplex(std::span<const double> y,
                                               std::span<const double> caps,
                                               double total, double floor) {
  const std::size_t n = y.size();
  if (n == 0 || caps.size() != n) {
    throw DimensionError("projection: y and caps must be non-empty and equally long");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(caps[i] >= floor)) {
      throw InfeasibleError("projection: cap " + std::to_string(i) + " is below the floor");
    }
    if (!std::isfinite(y[i])) throw NumericOverflowError("projection: non-finite input");
  }
  const double cap_sum = std::accumulate(caps.begin(), caps.end(), 0.0);
  if (cap_sum < total) {
    throw InfeasibleError("projection: sum of caps is below the target total");
  }
  if (total < static_cast<double>(n) * floor) {
    throw InfeasibleError("projection: target total is below N * floor");
  }

  std::vector<double> kinks;
  kinks.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    kinks.push_back(y[i] - caps[i]);
    kinks.push_back(y[i] - floor);
  }
  std::sort(kinks.begin(), kinks.end());

  // First kink whose clamped sum is <= total. The last kink sends every
  // coordinate to the floor, so such a kink always exists.
  std::size_t lo = 0;
  std::size_t hi = kinks.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (clamped_sum(y, caps, floor, kinks[mid]) <= total) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }

  double shift = kinks[lo];
  if (lo > 0) {
    const double left = kinks[lo - 1];
    const double s_left = clamped_sum(y, caps, floor, left);
    const double s_right = clamped_sum(y, caps, floor, kinks[lo]);
    if (s_left > s_right) {
      shift = left + (s_left - total) * (kinks[lo] - left) / (s_left - s_right);
    }
  }

  CappedSimplexProjection out;
  out.shift = shift;
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = std::clamp(y[i] - shift, floor, caps[i]);
  return out;
}

}  // namespace mupa
