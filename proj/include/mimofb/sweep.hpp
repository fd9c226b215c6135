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

#ifndef MIMOFB_SWEEP_HPP
#define MIMOFB_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mimofb/config.hpp"
#include "mimofb/schemes.hpp"

namespace mimofb {

// Tolerance of the per-trial check sum_rate <= dual-MAC capacity.
inline constexpr double kCapacityBoundSlack = 1e-6;

/// Aggregated statistics of one (scheme, N, P) cell. Rates in nats.
struct CellStats {
  std::string scheme;
  std::size_t M = 0;
  std::size_t K = 0;
  std::size_t N = 0;
  double P = 0.0;
  std::size_t trials = 0;
  double mean_sum_rate = 0.0;
  double stderr_sum_rate = 0.0;  // sample stdev / sqrt(trials)
  double mean_feedback_bits = 0.0;
  double mean_users_signaling = 0.0;
  double fallback_frac = 0.0;
  double mean_ropt = 0.0;  // NaN when not computed
  double stderr_ropt = 0.0;
  std::size_t ropt_trials = 0;
  // Trials with a dual-MAC value, and those whose sum rate exceeded it.
  std::size_t bound_checks = 0;
  std::size_t bound_violations = 0;
  // Stream alignments compared against their guaranteed lower bound.
  std::size_t alignment_checks = 0;
  std::size_t alignment_violations = 0;
  bool operator==(const CellStats&) const = default;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<CellStats> cells;
  // Per-cell sum rates in trial order (same order as `cells`). Kept in
  // memory for paired analyses; not written to disk.
  std::vector<std::vector<double>> trial_sum_rates;
};

// Seed of the snapshot used by `trial` at grid size N. It does not depend
// on P, so all powers see the same channels.
std::uint64_t snapshot_seed(std::uint64_t seed, std::size_t N, std::size_t trial);

// Stream of scheme `stream` at power P on a snapshot.
std::uint64_t scheme_seed(std::uint64_t snapshot, double P, std::uint64_t stream);

// Runs one configured scheme on a snapshot with resolved parameters.
SchemeOutcome run_scheme(const SchemeConfig& scheme, const Snapshot& snap, double P, Rng& rng);

/// Runs every grid cell and trial. Trials run on `workers` OpenMP threads;
/// statistics are reduced with compensated summation in trial order, so
/// the result is identical for every worker count.
SweepResult run_sweep(const ExperimentConfig& cfg, int workers = 1);

// Serial reference of run_sweep (one thread, plain loop).
SweepResult run_sweep_serial(const ExperimentConfig& cfg);

// The comma-separated table and JSON summary as text.
std::string format_csv(const SweepResult& result);
nlohmann::json summary_json(const SweepResult& result);

// Writes results.csv and summary.json into `dir` (created if missing).
// Throws IoError when the directory or files cannot be written.
void emit_results(const SweepResult& result, const std::filesystem::path& dir);

// Rebuilds config and cells from a summary document.
SweepResult load_summary(const nlohmann::json& doc);

inline constexpr const char* kCsvHeader =
    "scheme,M,K,N,P,trials,mean_sum_rate_nats,stderr_nats,mean_feedback_bits,"
    "mean_users_signaling,fallback_frac,mean_ropt_nats";

// %.17g, with "nan" for NaN.
std::string format_double(double x);

}  // namespace mimofb

#endif
