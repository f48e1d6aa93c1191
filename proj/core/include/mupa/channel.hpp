// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mupa {

using ComplexMatrix = Eigen::MatrixXcd;

/// Largest accepted condition number of the Gram matrix H^H H.
inline constexpr double kMaxGramCondition = 1e12;

/// Uplink channel: M receive antennas by N single-antenna users plus the
/// receiver noise power. Immutable once constructed.
///
/// Construction enforces M >= N, sigma2 > 0, finite entries and a
/// well-conditioned Gram matrix (cond(H^H H) <= kMaxGramCondition).
class ChannelRealization {
 public:
  ChannelRealization(ComplexMatrix h, double sigma2);

  [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return h_; }
  [[nodiscard]] double noise_power() const noexcept { return sigma2_; }
  [[nodiscard]] std::size_t receive_antennas() const noexcept {
    return static_cast<std::size_t>(h_.rows());
  }
  [[nodiscard]] std::size_t users() const noexcept {
    return static_cast<std::size_t>(h_.cols());
  }

 private:
  ComplexMatrix h_;
  double sigma2_;
};

/// Per-user zero-forcing SINR per watt, in 1/W. Every entry is finite and > 0.
class EffectiveGains {
 public:
  explicit EffectiveGains(std::vector<double> delta);

  [[nodiscard]] std::span<const double> values() const noexcept { return delta_; }
  [[nodiscard]] std::size_t size() const noexcept { return delta_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return delta_[i]; }

 private:
  std::vector<double> delta_;
};

/// Condition number of H^H H (ratio of extreme eigenvalues).
[[nodiscard]] double gram_condition_number(const ComplexMatrix& h);

/// delta_i = 1 / (sigma2 * [(H^H H)^{-1}]_ii), via a Cholesky factorization
/// of the Gram matrix.
[[nodiscard]] EffectiveGains compute_effective_gains(const ChannelRealization& ch);

/// Power-dB to linear: delta_i = 10^(db_i / 10).
[[nodiscard]] EffectiveGains gains_from_db(std::span<const double> delta_db);

/// Linear to power-dB.
[[nodiscard]] std::vector<double> gains_to_db(const EffectiveGains& gains);

/// i.i.d. CN(0,1) entries drawn from a seeded generator.
[[nodiscard]] ComplexMatrix rayleigh_channel(std::size_t receive_antennas,
                                             std::size_t users, std::uint64_t seed);

/// Reads a channel matrix from CSV, one row per receive antenna.
///
/// Two layouts are accepted and chosen per row by column count:
///   * N columns, each a complex literal "re+imj" / "re-imj" / "re" / "imj";
///   * 2N columns, pairs "re,im" per user.
/// Blank lines and lines starting with '#' are skipped.
[[nodiscard]] ComplexMatrix read_channel_csv(std::istream& in, std::size_t users);
[[nodiscard]] ComplexMatrix read_channel_csv(const std::filesystem::path& path,
                                             std::size_t users);

}  // namespace mupa
