// SPDX-License-Identifier: Apache-2.0
//
// mimofb: limited-feedback scheduling for the MIMO broadcast channel
// Copyright (C) 2026 The mimofb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMOFB_CONFIG_HPP
#define MIMOFB_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mimofb {

enum class SchemeKind {
  kRbf,
  kRbfThreshold,
  kEigenZfbf,
  kEigenZfbfQuantized,
  kAlgorithmA,
  kAlgorithmB,
  kLowSnrRvq,
};

std::string to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(const std::string& name);

/// A scheme parameter given either as a number or as a rule evaluated per
/// grid cell:
///   {"rule": "ln_n", "scale": s}                      s ln N
///   {"rule": "algorithm_b"}                           eigenvalue threshold for K = M staging
///   {"rule": "rbf_target", "target": f, "T": T}       random-beam threshold for f expected reports
///   {"rule": "inv_ln_n"}                              1 / ln N
///   {"rule": "delta_over_p_ln_n", "delta": d}         d / (P ln N)
struct ParamSpec {
  enum class Rule { kValue, kLnN, kAlgorithmB, kRbfTarget, kInvLnN, kDeltaOverPLnN };
  Rule rule = Rule::kValue;
  double value = 0.0;
  double scale = 1.0;
  double target = 1.0;
  double T = 1.0;
  double delta = 1.0;

  static ParamSpec constant(double v) { return {Rule::kValue, v}; }
  double resolve(std::size_t N, std::size_t M, std::size_t K, double P) const;
  bool operator==(const ParamSpec&) const = default;
};

struct SchemeConfig {
  std::string name;
  SchemeKind kind = SchemeKind::kRbf;
  // RNG stream of the scheme; schemes sharing a stream draw identical
  // random selections on the same snapshot.
  std::uint64_t stream = 0;
  std::optional<ParamSpec> t;
  std::optional<ParamSpec> beta;
  std::optional<ParamSpec> eps;
  std::optional<std::uint64_t> B;
  std::optional<double> f_target;
  std::uint64_t sinr_bits = 16;
  bool operator==(const SchemeConfig&) const = default;
};

struct ExperimentConfig {
  std::size_t M = 2;
  std::size_t K = 1;
  std::vector<std::size_t> N_grid;
  std::vector<double> P_grid;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::vector<SchemeConfig> schemes;
  bool compute_ropt = false;
  std::size_t ropt_every = 1;
  std::string output_dir = "out";
  bool operator==(const ExperimentConfig&) const = default;
};

// Strict parsing: unknown keys, wrong types and infeasible combinations
// (for instance Algorithm B with K != M) raise ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

// Checks every scheme against the dimensions and grids; throws ConfigError.
void check_experiment_config(const ExperimentConfig& cfg);

// True for a JSON integer >= 0, whether stored signed or unsigned.
bool is_json_count(const nlohmann::json& v);

// Reads a whole JSON document; IoError when unreadable, ConfigError when
// malformed.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace mimofb

#endif
