// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include "mupa/channel.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "mupa/errors.hpp"

namespace mupa {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view s, std::size_t line_no) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("channel CSV line " + std::to_string(line_no) +
                     ": cannot parse number '" + std::string(s) + "'");
  }
  return value;
}

std::complex<double> parse_complex(std::string_view s, std::size_t line_no) {
  s = trim(s);
  if (s.empty()) {
    throw ParseError("channel CSV line " + std::to_string(line_no) + ": empty entry");
  }
  const char tail = s.back();
  if (tail != 'j' && tail != 'i') return {parse_real(s, line_no), 0.0};

  const std::string_view body = s.substr(0, s.size() - 1);
  // The imaginary part starts at the last sign that is not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [&](std::string_view part) {
    part = trim(part);
    if (part == "+" || part.empty()) return 1.0;
    if (part == "-") return -1.0;
    return parse_real(part, line_no);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split), line_no), imag_of(body.substr(split))};
}

}  // namespace

ChannelRealization::ChannelRealization(ComplexMatrix h, double sigma2)
    : h_(std::move(h)), sigma2_(sigma2) {
  if (h_.cols() == 0) throw DimensionError("channel matrix has no user columns");
  if (h_.rows() < h_.cols()) {
    throw DimensionError("channel matrix has M=" + std::to_string(h_.rows()) +
                         " receive antennas for N=" + std::to_string(h_.cols()) +
                         " users; zero forcing needs M >= N");
  }
  if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) {
    throw DomainError("noise power must be finite and > 0");
  }
  if (!h_.allFinite()) throw DomainError("channel matrix has non-finite entries");
  const double cond = gram_condition_number(h_);
  if (!(cond <= kMaxGramCondition)) {
    std::ostringstream msg;
    msg << "channel Gram matrix is singular or ill-conditioned (cond = " << cond << ")";
    throw SingularGramError(msg.str());
  }
}

EffectiveGains::EffectiveGains(std::vector<double> delta) : delta_(std::move(delta)) {
  for (std::size_t i = 0; i < delta_.size(); ++i) {
    if (!(delta_[i] > 0.0) || !std::isfinite(delta_[i])) {
      throw DomainError("effective gain " + std::to_string(i) +
                        " must be finite and > 0");
    }
  }
}

double gram_condition_number(const ComplexMatrix& h) {
  const ComplexMatrix gram = h.adjoint() * h;
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const auto& ev = eig.eigenvalues();  // ascending
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

EffectiveGains compute_effective_gains(const ChannelRealization& ch) {
  const ComplexMatrix& h = ch.matrix();
  const auto n = h.cols();
  const ComplexMatrix gram = h.adjoint() * h;
  const Eigen::LLT<ComplexMatrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularGramError("Cholesky factorization of the Gram matrix failed");
  }
  const ComplexMatrix inv = llt.solve(ComplexMatrix::Identity(n, n));

  std::vector<double> delta(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double diag = inv(i, i).real();
    if (!(diag > 0.0)) throw SingularGramError("non-positive diagonal in (H^H H)^{-1}");
    delta[static_cast<std::size_t>(i)] = 1.0 / (ch.noise_power() * diag);
  }
  return EffectiveGains(std::move(delta));
}

EffectiveGains gains_from_db(std::span<const double> delta_db) {
  std::vector<double> delta;
  delta.reserve(delta_db.size());
  for (const double db : delta_db) {
    if (!std::isfinite(db)) throw DomainError("gain in dB must be finite");
    delta.push_back(std::pow(10.0, db / 10.0));
  }
  return EffectiveGains(std::move(delta));
}

std::vector<double> gains_to_db(const EffectiveGains& gains) {
  std::vector<double> db;
  db.reserve(gains.size());
  for (const double d : gains.values()) db.push_back(10.0 * std::log10(d));
  return db;
}

ComplexMatrix rayleigh_channel(std::size_t receive_antennas, std::size_t users,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Unit total variance: real and imaginary parts each carry 1/2.
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix h(static_cast<Eigen::Index>(receive_antennas),
                  static_cast<Eigen::Index>(users));
  for (Eigen::Index c = 0; c < h.cols(); ++c) {
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      h(r, c) = {re, im};
    }
  }
  return h;
}

ComplexMatrix read_channel_csv(std::istream& in, std::size_t users) {
  if (users == 0) throw DimensionError("channel CSV needs at least one user column");
  std::vector<std::vector<std::complex<double>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;

    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      cells.push_back(view.substr(start, comma == std::string_view::npos
                                              ? std::string_view::npos
                                              : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }

    std::vector<std::complex<double>> row;
    row.reserve(users);
    if (cells.size() == users) {
      for (const auto cell : cells) row.push_back(parse_complex(cell, line_no));
    } else if (cells.size() == 2 * users) {
      for (std::size_t u = 0; u < users; ++u) {
        row.emplace_back(parse_real(cells[2 * u], line_no),
                         parse_real(cells[2 * u + 1], line_no));
      }
    } else {
      throw ParseError("channel CSV line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " columns; expected " +
                       std::to_string(users) + " complex or " +
                       std::to_string(2 * users) + " real columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("channel CSV contains no rows");

  ComplexMatrix h(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(users));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < users; ++c) {
      h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return h;
}

ComplexMatrix read_channel_csv(const std::filesystem::path& path, std::size_t users) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open channel CSV '" + path.string() + "'");
  return read_channel_csv(in, users);
}

}  // namespace mupa
