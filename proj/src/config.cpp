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

#include "mimofb/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mimofb/asymptotics.hpp"
#include "mimofb/errors.hpp"
#include "mimofb/schemes.hpp"

namespace mimofb {

using nlohmann::json;

namespace {

struct SchemeName {
  SchemeKind kind;
  const char* name;
};

constexpr SchemeName kSchemeNames[] = {
    {SchemeKind::kRbf, "rbf"},
    {SchemeKind::kRbfThreshold, "rbf_threshold"},
    {SchemeKind::kEigenZfbf, "eigen_zfbf"},
    {SchemeKind::kEigenZfbfQuantized, "eigen_zfbf_quantized"},
    {SchemeKind::kAlgorithmA, "algorithm_a"},
    {SchemeKind::kAlgorithmB, "algorithm_b"},
    {SchemeKind::kLowSnrRvq, "low_snr_rvq"},
};

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  }
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": must be finite");
  return x;
}

std::uint64_t get_count(const json& v, const std::string& where) {
  if (!is_json_count(v)) throw ConfigError(where + ": expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError(where + ": expected true or false");
  return v.get<bool>();
}

ParamSpec parse_param(const json& v, const std::string& where) {
  if (v.is_number()) return ParamSpec::constant(get_number(v, where));
  if (!v.is_object() || !v.contains("rule") || !v["rule"].is_string())
    throw ConfigError(where + ": expected a number or an object with a 'rule'");
  const std::string rule = v["rule"].get<std::string>();
  ParamSpec p;
  if (rule == "ln_n") {
    require_keys(v, where, {"rule", "scale"}, {"rule"});
    p.rule = ParamSpec::Rule::kLnN;
    if (v.contains("scale")) p.scale = get_number(v["scale"], where + ".scale");
  } else if (rule == "algorithm_b") {
    require_keys(v, where, {"rule"}, {"rule"});
    p.rule = ParamSpec::Rule::kAlgorithmB;
  } else if (rule == "rbf_target") {
    require_keys(v, where, {"rule", "target", "T"}, {"rule", "target"});
    p.rule = ParamSpec::Rule::kRbfTarget;
    p.target = get_number(v["target"], where + ".target");
    if (v.contains("T")) p.T = get_number(v["T"], where + ".T");
  } else if (rule == "inv_ln_n") {
    require_keys(v, where, {"rule"}, {"rule"});
    p.rule = ParamSpec::Rule::kInvLnN;
  } else if (rule == "delta_over_p_ln_n") {
    require_keys(v, where, {"rule", "delta"}, {"rule", "delta"});
    p.rule = ParamSpec::Rule::kDeltaOverPLnN;
    p.delta = get_number(v["delta"], where + ".delta");
  } else {
    throw ConfigError(where + ": unknown rule '" + rule + "'");
  }
  return p;
}

json param_to_json(const ParamSpec& p) {
  switch (p.rule) {
    case ParamSpec::Rule::kValue: return p.value;
    case ParamSpec::Rule::kLnN: return {{"rule", "ln_n"}, {"scale", p.scale}};
    case ParamSpec::Rule::kAlgorithmB: return {{"rule", "algorithm_b"}};
    case ParamSpec::Rule::kRbfTarget: return {{"rule", "rbf_target"}, {"target", p.target}, {"T", p.T}};
    case ParamSpec::Rule::kInvLnN: return {{"rule", "inv_ln_n"}};
    case ParamSpec::Rule::kDeltaOverPLnN: return {{"rule", "delta_over_p_ln_n"}, {"delta", p.delta}};
  }
  return nullptr;
}

// Keys each scheme type accepts beyond name/type/stream, and which of them
// are mandatory.
struct SchemeKeys {
  std::set<std::string> optional;
  std::set<std::string> required;
};

SchemeKeys keys_for(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kRbf: return {{"sinr_bits"}, {}};
    case SchemeKind::kRbfThreshold: return {{}, {"t"}};
    case SchemeKind::kEigenZfbf: return {{}, {"t"}};
    case SchemeKind::kEigenZfbfQuantized: return {{}, {"t", "B"}};
    case SchemeKind::kAlgorithmA: return {{}, {"t", "beta", "eps", "B"}};
    case SchemeKind::kAlgorithmB: return {{}, {"t", "eps"}};
    case SchemeKind::kLowSnrRvq: return {{}, {"f_target"}};
  }
  return {};
}

SchemeConfig parse_scheme(const json& v, std::size_t index) {
  const std::string where = "schemes[" + std::to_string(index) + "]";
  if (!v.is_object() || !v.contains("type") || !v["type"].is_string())
    throw ConfigError(where + ": expected an object with a string 'type'");
  SchemeConfig s;
  try {
    s.kind = scheme_kind_from_string(v["type"].get<std::string>());
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ": " + e.what());
  }
  const SchemeKeys keys = keys_for(s.kind);
  std::set<std::string> allowed{"type", "name", "stream"};
  allowed.insert(keys.optional.begin(), keys.optional.end());
  allowed.insert(keys.required.begin(), keys.required.end());
  require_keys(v, where, allowed, keys.required);

  s.name = to_string(s.kind);
  if (v.contains("name")) {
    if (!v["name"].is_string() || v["name"].get<std::string>().empty())
      throw ConfigError(where + ".name: expected a nonempty string");
    s.name = v["name"].get<std::string>();
  }
  s.stream = v.contains("stream") ? get_count(v["stream"], where + ".stream") : index;
  if (v.contains("t")) s.t = parse_param(v["t"], where + ".t");
  if (v.contains("beta")) s.beta = parse_param(v["beta"], where + ".beta");
  if (v.contains("eps")) s.eps = parse_param(v["eps"], where + ".eps");
  if (v.contains("B")) s.B = get_count(v["B"], where + ".B");
  if (v.contains("f_target")) s.f_target = get_number(v["f_target"], where + ".f_target");
  if (v.contains("sinr_bits")) s.sinr_bits = get_count(v["sinr_bits"], where + ".sinr_bits");
  return s;
}

void check_range(double x, double lo, double hi, const std::string& what) {
  if (!(x > lo && x < hi)) {
    std::ostringstream os;
    os << what << " = " << x << " outside (" << lo << ", " << hi << ")";
    throw ConfigError(os.str());
  }
}

}  // namespace

bool is_json_count(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::string to_string(SchemeKind kind) {
  for (const auto& s : kSchemeNames)
    if (s.kind == kind) return s.name;
  return "unknown";
}

SchemeKind scheme_kind_from_string(const std::string& name) {
  for (const auto& s : kSchemeNames)
    if (name == s.name) return s.kind;
  throw InvalidInput("unknown scheme type '" + name + "'");
}

double ParamSpec::resolve(std::size_t N, std::size_t M, std::size_t K, double P) const {
  const double n = static_cast<double>(N);
  switch (rule) {
    case Rule::kValue: return value;
    case Rule::kLnN: return scale * std::log(n);
    case Rule::kAlgorithmB: return algorithm_b_threshold(M, K, n);
    case Rule::kRbfTarget: return rbf_threshold_solve(N, M, P, target, T);
    case Rule::kInvLnN:
      if (!(N >= 3)) throw DomainError("inv_ln_n: N must be at least 3");
      return 1.0 / std::log(n);
    case Rule::kDeltaOverPLnN:
      if (!(N >= 2)) throw DomainError("delta_over_p_ln_n: N must be at least 2");
      return delta / (P * std::log(n));
  }
  throw DomainError("ParamSpec: unknown rule");
}

ExperimentConfig parse_experiment_config(const json& doc) {
  require_keys(doc, "config",
               {"M", "K", "N_grid", "P_grid", "trials", "seed", "schemes", "compute_ropt",
                "ropt_every", "output_dir"},
               {"M", "K", "N_grid", "P_grid", "trials", "seed", "schemes"});
  ExperimentConfig cfg;
  cfg.M = get_count(doc["M"], "M");
  cfg.K = get_count(doc["K"], "K");
  if (!doc["N_grid"].is_array()) throw ConfigError("N_grid: expected an array");
  for (std::size_t i = 0; i < doc["N_grid"].size(); ++i)
    cfg.N_grid.push_back(get_count(doc["N_grid"][i], "N_grid[" + std::to_string(i) + "]"));
  if (!doc["P_grid"].is_array()) throw ConfigError("P_grid: expected an array");
  for (std::size_t i = 0; i < doc["P_grid"].size(); ++i)
    cfg.P_grid.push_back(get_number(doc["P_grid"][i], "P_grid[" + std::to_string(i) + "]"));
  cfg.trials = get_count(doc["trials"], "trials");
  cfg.seed = get_count(doc["seed"], "seed");
  if (!doc["schemes"].is_array()) throw ConfigError("schemes: expected an array");
  for (std::size_t i = 0; i < doc["schemes"].size(); ++i)
    cfg.schemes.push_back(parse_scheme(doc["schemes"][i], i));
  if (doc.contains("compute_ropt")) cfg.compute_ropt = get_bool(doc["compute_ropt"], "compute_ropt");
  if (doc.contains("ropt_every")) cfg.ropt_every = get_count(doc["ropt_every"], "ropt_every");
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("output_dir: expected a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  check_experiment_config(cfg);
  return cfg;
}

void check_experiment_config(const ExperimentConfig& cfg) {
  if (cfg.M < 1 || cfg.K < 1) throw ConfigError("M and K must be at least 1");
  if (cfg.K > cfg.M) throw ConfigError("K must not exceed M");
  if (cfg.N_grid.empty()) throw ConfigError("N_grid must be nonempty");
  if (cfg.P_grid.empty()) throw ConfigError("P_grid must be nonempty");
  for (auto n : cfg.N_grid)
    if (n < 1) throw ConfigError("N_grid entries must be at least 1");
  for (auto p : cfg.P_grid)
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("P_grid entries must be positive");
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (cfg.ropt_every < 1) throw ConfigError("ropt_every must be at least 1");
  if (cfg.schemes.empty()) throw ConfigError("schemes must be nonempty");

  std::set<std::string> names;
  for (const auto& s : cfg.schemes) {
    if (!names.insert(s.name).second) throw ConfigError("duplicate scheme name '" + s.name + "'");
    const std::string where = "scheme '" + s.name + "'";
    if (s.kind == SchemeKind::kAlgorithmA && !(cfg.K < cfg.M))
      throw ConfigError(where + ": algorithm_a requires K < M");
    if (s.kind == SchemeKind::kAlgorithmB && cfg.K != cfg.M)
      throw ConfigError(where + ": algorithm_b requires K = M");
    if (s.B && (*s.B < 1 || *s.B > 24)) throw ConfigError(where + ": B must be in [1, 24]");
    if (s.kind == SchemeKind::kLowSnrRvq) {
      if (!(*s.f_target > 1.0)) throw ConfigError(where + ": f_target must exceed 1");
      if (low_snr_codebook_bits(*s.f_target) > 24) throw ConfigError(where + ": f_target too large");
    }
    // Every rule must resolve to an admissible value on every grid cell.
    for (auto n : cfg.N_grid) {
      for (auto p : cfg.P_grid) {
        try {
          if (s.kind == SchemeKind::kLowSnrRvq) low_snr_threshold(n, cfg.M, cfg.K, *s.f_target);
          if (s.t && !(s.t->resolve(n, cfg.M, cfg.K, p) >= 0.0))
            throw ConfigError(where + ": t must be nonnegative");
          if (s.beta) check_range(s.beta->resolve(n, cfg.M, cfg.K, p), 0.0, 1.0, where + ": beta");
          if (s.eps) check_range(s.eps->resolve(n, cfg.M, cfg.K, p), 0.0, 1.0, where + ": eps");
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          throw ConfigError(where + " at N=" + std::to_string(n) + ": " + e.what());
        }
      }
    }
  }
}

json to_json(const ExperimentConfig& cfg) {
  json schemes = json::array();
  for (const auto& s : cfg.schemes) {
    json j = {{"name", s.name}, {"type", to_string(s.kind)}, {"stream", s.stream}};
    if (s.kind == SchemeKind::kRbf) j["sinr_bits"] = s.sinr_bits;
    if (s.t) j["t"] = param_to_json(*s.t);
    if (s.beta) j["beta"] = param_to_json(*s.beta);
    if (s.eps) j["eps"] = param_to_json(*s.eps);
    if (s.B) j["B"] = *s.B;
    if (s.f_target) j["f_target"] = *s.f_target;
    schemes.push_back(std::move(j));
  }
  return {{"M", cfg.M},
          {"K", cfg.K},
          {"N_grid", cfg.N_grid},
          {"P_grid", cfg.P_grid},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"schemes", schemes},
          {"compute_ropt", cfg.compute_ropt},
          {"ropt_every", cfg.ropt_every},
          {"output_dir", cfg.output_dir}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_json_file(path));
}

}  // namespace mimofb
