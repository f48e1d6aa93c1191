// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mupa/primal_dual.hpp"

namespace mupa {

/// 12 significant digits, '.' decimal separator, locale independent.
[[nodiscard]] std::string format_number(double value);

/// Comma-delimited, LF-terminated numeric CSV with a mandatory header row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::span<const std::string> header);

  void row(std::span<const double> values);

 private:
  std::ostream* out_;
  std::size_t columns_;
};

/// Columns t, P_1..P_N, lambda, total_utility, V.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace mupa
