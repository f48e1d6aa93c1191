// Copyright 2026 The mupa Authors
// SPDX-License-Identifier: Apache-2.0

#include "mupa/scenario_file.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "mupa/channel.hpp"
#include "mupa/errors.hpp"

namespace mupa {

namespace {

constexpr std::array kKnownKeys = {
    "n_users",          "receive_antennas",     "delta_db",
    "channel_csv",      "channel_rayleigh",     "sigma2_watts",
    "w",                "p_max_individual_watts", "p_circuit_watts",
    "p_sum_max_watts",  "seed",                 "solver_tol_root",
    "solver_tol_kkt",   "solver_tol_step",      "solver_max_iter",
    "solver_gp_step",   "solver_p_floor_watts", "pd_gain_primal",
    "pd_gain_dual",     "pd_init_p_watts",      "pd_init_lambda",
    "pd_tol_eq",        "pd_max_steps",         "pd_record_every",
};

template <typename T>
T scalar(const YAML::Node& root, const char* key) {
  try {
    return root[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(fmt::format("key '{}' has an invalid value", key));
  }
}

template <typename T>
T scalar_or(const YAML::Node& root, const char* key, T fallback) {
  return root[key] ? scalar<T>(root, key) : fallback;
}

// A sequence of length n, or a scalar broadcast to n entries.
std::vector<double> per_user(const YAML::Node& root, const char* key, std::size_t n) {
  const YAML::Node node = root[key];
  if (!node) throw ParseError(fmt::format("missing required key '{}'", key));
  try {
    if (node.IsScalar()) return std::vector<double>(n, node.as<double>());
    if (!node.IsSequence()) throw ParseError("");
    auto values = node.as<std::vector<double>>();
    if (values.size() != n) {
      throw DimensionError(fmt::format("key '{}' has {} entries but n_users = {}", key,
                                       values.size(), n));
    }
    return values;
  } catch (const YAML::Exception&) {
    throw ParseError(fmt::format("key '{}' must be a number or a list of numbers", key));
  } catch (const ParseError&) {
    throw ParseError(fmt::format("key '{}' must be a number or a list of numbers", key));
  }
}

}  // namespace

LoadedScenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(fmt::format("scenario is not valid YAML: {}", e.what()));
  }
  if (!root.IsMap()) throw ParseError("scenario must be a key-value mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw ParseError(fmt::format("unknown key '{}'", key));
    }
  }

  if (!root["n_users"]) throw ParseError("missing required key 'n_users'");
  const auto n_signed = scalar<long long>(root, "n_users");
  if (n_signed < 1) throw DomainError("n_users must be >= 1");
  const auto n = static_cast<std::size_t>(n_signed);

  LoadedScenario out{
      .scenario = Scenario{.users = {}, .delta = EffectiveGains(std::vector<double>(n, 1.0))},
      .pd = PdSettings::defaults(n),
      .receive_antennas = n,
      .source = GainSource::DeltaDb,
      .seed = std::nullopt,
  };
  const auto m_signed = scalar_or<long long>(root, "receive_antennas", n_signed);
  if (m_signed < n_signed) {
    throw DimensionError(fmt::format(
        "receive_antennas = {} is below n_users = {}; zero forcing needs M >= N", m_signed,
        n_signed));
  }
  out.receive_antennas = static_cast<std::size_t>(m_signed);

  if (seed_override) {
    out.seed = seed_override;
  } else if (root["seed"]) {
    out.seed = scalar<std::uint64_t>(root, "seed");
  }

  const int sources = static_cast<int>(static_cast<bool>(root["delta_db"])) +
                      static_cast<int>(static_cast<bool>(root["channel_csv"])) +
                      static_cast<int>(static_cast<bool>(root["channel_rayleigh"]));
  if (sources != 1) {
    throw ParseError(
        "exactly one gain source is required: delta_db, channel_csv or channel_rayleigh");
  }
  if (root["delta_db"]) {
    out.source = GainSource::DeltaDb;
    const auto db = per_user(root, "delta_db", n);
    out.scenario.delta = gains_from_db(db);
  } else {
    if (!root["sigma2_watts"]) throw ParseError("channel sources require 'sigma2_watts'");
    const auto sigma2 = scalar<double>(root, "sigma2_watts");
    ComplexMatrix h;
    if (root["channel_csv"]) {
      out.source = GainSource::ChannelCsv;
      std::filesystem::path csv = scalar<std::string>(root, "channel_csv");
      if (csv.is_relative()) csv = base_dir / csv;
      h = read_channel_csv(csv, n);
      if (static_cast<std::size_t>(h.rows()) != out.receive_antennas) {
        throw DimensionError(fmt::format("channel CSV has {} rows but receive_antennas = {}",
                                         h.rows(), out.receive_antennas));
      }
    } else {
      out.source = GainSource::Rayleigh;
      if (!scalar<bool>(root, "channel_rayleigh")) {
        throw ParseError("channel_rayleigh must be true when present");
      }
      if (!out.seed) throw ParseError("channel_rayleigh requires 'seed' or --seed");
      h = rayleigh_channel(out.receive_antennas, n, *out.seed);
    }
    out.scenario.delta = compute_effective_gains(ChannelRealization(std::move(h), sigma2));
  }

  const auto w = per_user(root, "w", n);
  const auto p_max = per_user(root, "p_max_individual_watts", n);
  const auto p_circuit = per_user(root, "p_circuit_watts", n);
  out.scenario.users.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.scenario.users[i] = UserParams{.w = w[i], .p_circuit = p_circuit[i], .p_max = p_max[i]};
  }
  if (!root["p_sum_max_watts"]) throw ParseError("missing required key 'p_sum_max_watts'");
  out.scenario.p_sum_max = scalar<double>(root, "p_sum_max_watts");

  auto& s = out.scenario.settings;
  s.tol_root = scalar_or(root, "solver_tol_root", s.tol_root);
  s.tol_kkt = scalar_or(root, "solver_tol_kkt", s.tol_kkt);
  s.tol_step = scalar_or(root, "solver_tol_step", s.tol_step);
  s.max_iter = scalar_or<std::int64_t>(root, "solver_max_iter", s.max_iter);
  s.gp_step = scalar_or(root, "solver_gp_step", s.gp_step);
  s.p_floor = scalar_or(root, "solver_p_floor_watts", s.p_floor);

  auto& pd = out.pd;
  if (root["pd_gain_primal"]) pd.k = per_user(root, "pd_gain_primal", n);
  pd.g = scalar_or(root, "pd_gain_dual", pd.g);
  if (root["pd_init_p_watts"]) pd.init_p = per_user(root, "pd_init_p_watts", n);
  pd.init_lambda = scalar_or(root, "pd_init_lambda", pd.init_lambda);
  pd.tol_eq = scalar_or(root, "pd_tol_eq", pd.tol_eq);
  pd.max_steps = scalar_or<std::int64_t>(root, "pd_max_steps", pd.max_steps);
  pd.record_every = scalar_or<std::int64_t>(root, "pd_record_every", pd.record_every);

  out.scenario.validate();
  pd.validate(n);
  return out;
}

LoadedScenario load_scenario(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open scenario file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path(), seed_override);
}

}  // namespace mupa
