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

#ifndef MIMOFB_VALIDATION_HPP
#define MIMOFB_VALIDATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mimofb {

/// Sample counts of the validation checks. Defaults are the full budget;
/// minimum_budget() holds the smallest counts at which the fixed
/// thresholds remain meaningful.
struct ValidationBudget {
  std::size_t row_norm_samples = 100000;
  std::size_t sinr_samples = 100000;
  std::size_t tail_samples = 1000000;
  std::size_t rvq_ks_samples = 10000;
  std::size_t theta_mean_samples = 100000;
  std::size_t residual_trials = 10000;
  std::size_t waterfill_instances = 20;
  std::size_t bound_trials = 50;
  std::size_t alg_a_trials = 500;
  std::size_t diversity_trials = 400;
  std::size_t saturation_trials = 400;
  std::size_t gap_trials = 400;
  std::size_t empty_trials = 2000;
  std::size_t determinism_trials = 20;
};

ValidationBudget minimum_budget();

// Throws ConfigError naming the first count below its minimum.
void check_budget(const ValidationBudget& budget);

// Known fault-injection targets (each corrupts the reference of one check).
const std::vector<std::string>& fault_names();

struct ValidationOptions {
  std::uint64_t seed = 20260101;
  ValidationBudget budget;
  int workers = 1;
  // Name from fault_names(), or empty.
  std::string inject_fault;
};

// Parses {"seed"?, "workers"?, "budget"?: {...}, "inject_fault"?} strictly.
ValidationOptions parse_validation_options(const nlohmann::json& doc);

/// Outcome of one check: `statistic` compared against `threshold` by
/// `relation` ("<", "<=", ">=" or "=="), over `samples` draws.
struct CheckResult {
  int criterion = 0;
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string relation;
  std::size_t samples = 0;
  bool pass = false;
  // One-sample KS critical value 1.628 / sqrt(n) at the 1% level, for KS
  // checks; NaN otherwise.
  double critical_value = 0.0;
  std::string detail;
};

// Running totals of the per-trial capacity bound across every sweep the
// suite runs.
struct BoundLedger {
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_excess = -1e300;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::function<std::vector<CheckResult>(const ValidationOptions&, BoundLedger&)> run;
};

// Criteria 1-13 in order.
const std::vector<Criterion>& criteria();

// Runs every criterion (the universal-bound criterion last, so it sees
// every sweep) and returns the checks ordered by criterion.
std::vector<CheckResult> run_validation_suite(const ValidationOptions& options);

bool all_passed(const std::vector<CheckResult>& checks);
std::string format_check(const CheckResult& check);
nlohmann::json report_json(const std::vector<CheckResult>& checks, const ValidationOptions& options);

}  // namespace mimofb

#endif
