// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include "mupa/csv.hpp"

#include <fmt/format.h>

#include "mupa/errors.hpp"

namespace mupa {

std::string format_number(double value) { return fmt::format("{:.12g}", value); }

CsvWriter::CsvWriter(std::ostream& out, std::span<const std::string> header)
    : out_(&out), columns_(header.size()) {
  std::string line;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) line += ',';
    line += header[i];
  }
  line += '\n';
  *out_ << line;
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) {
    throw DimensionError(fmt::format("CSV row has {} values for {} columns", values.size(),
                                     columns_));
  }
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) line += ',';
    line += format_number(values[i]);
  }
  line += '\n';
  *out_ << line;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.p_u.size();
  std::vector<std::string> header{"t"};
  for (std::size_t i = 0; i < n; ++i) header.push_back(fmt::format("P_{}", i + 1));
  header.insert(header.end(), {"lambda", "total_utility", "V"});

  CsvWriter csv(out, header);
  std::vector<double> values;
  for (const auto& r : traj.records) {
    values.clear();
    values.push_back(static_cast<double>(r.t));
    values.insert(values.end(), r.p.begin(), r.p.end());
    values.push_back(r.lambda);
    values.push_back(r.total_utility);
    values.push_back(r.lyapunov);
    csv.row(values);
  }
}

}  // namespace mupa
