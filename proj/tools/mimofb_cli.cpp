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

// Command-line entry point.
//
//   mimofb validate [--config <path>] [--seed <int>] [--out <dir>] [--workers <int>]
//   mimofb run      --config <path> [--n <int>] [--p <real>] [--seed <int>] [--out <dir>] [--workers <int>]
//   mimofb sweep    --config <path> [--seed <int>] [--out <dir>] [--workers <int>]
//
// Exit codes: 0 success, 1 validation failure, 2 configuration or I/O
// error, 3 unexpected runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mimofb/config.hpp"
#include "mimofb/errors.hpp"
#include "mimofb/parallel.hpp"
#include "mimofb/sweep.hpp"
#include "mimofb/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config, "JSON configuration file");
  if (config_required) opt->required();
  cmd->add_option("--seed", args.seed, "Override the experiment seed");
  cmd->add_option("--out", args.out, "Output directory");
  cmd->add_option("--workers", args.workers, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
}

int workers_of(const CommonArgs& args) { return args.workers > 0 ? args.workers : mimofb::hardware_workers(); }

int do_validate(const CommonArgs& args) {
  mimofb::ValidationOptions options;
  if (!args.config.empty()) options = mimofb::parse_validation_options(mimofb::read_json_file(args.config));
  if (args.seed) options.seed = *args.seed;
  if (args.workers > 0) options.workers = args.workers;
  else if (args.config.empty()) options.workers = mimofb::hardware_workers();

  const auto checks = mimofb::run_validation_suite(options);
  for (const auto& c : checks) std::cout << mimofb::format_check(c) << '\n';
  const bool ok = mimofb::all_passed(checks);
  if (!args.out.empty()) {
    std::filesystem::create_directories(args.out);
    const auto path = std::filesystem::path(args.out) / "validation.json";
    std::ofstream out(path);
    if (!out) throw mimofb::IoError("cannot write '" + path.string() + "'");
    out << mimofb::report_json(checks, options).dump(2) << '\n';
  }
  std::cout << (ok ? "validation passed" : "validation FAILED") << '\n';
  return ok ? kExitOk : kExitValidationFailed;
}

int do_sweep(const CommonArgs& args, mimofb::ExperimentConfig cfg) {
  if (args.seed) cfg.seed = *args.seed;
  const std::string out = args.out.empty() ? cfg.output_dir : args.out;
  const mimofb::SweepResult result = mimofb::run_sweep(cfg, workers_of(args));
  mimofb::emit_results(result, out);
  std::cout << mimofb::format_csv(result);
  std::size_t violations = 0;
  for (const auto& c : result.cells) violations += c.bound_violations;
  if (cfg.compute_ropt) std::cout << "capacity bound violations: " << violations << '\n';
  std::cout << "wrote " << (std::filesystem::path(out) / "results.csv").string() << " and "
            << (std::filesystem::path(out) / "summary.json").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limited-feedback MIMO broadcast channel simulator"};
  app.require_subcommand(1);

  CommonArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Run the distribution and bound validation suite");
  add_common(validate, validate_args, false);

  CommonArgs run_args;
  std::optional<std::size_t> run_n;
  std::optional<double> run_p;
  auto* run = app.add_subcommand("run", "Run a single (N, P) cell");
  add_common(run, run_args, true);
  run->add_option("--n", run_n, "Number of users (overrides N_grid)");
  run->add_option("--p", run_p, "Transmit power (overrides P_grid)");

  CommonArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run the full (N, P) grid");
  add_common(sweep, sweep_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*validate) return do_validate(validate_args);
    if (*run) {
      mimofb::ExperimentConfig cfg = mimofb::load_experiment_config(run_args.config);
      if (run_n) cfg.N_grid = {*run_n};
      if (run_p) cfg.P_grid = {*run_p};
      if (cfg.N_grid.size() != 1 || cfg.P_grid.size() != 1)
        throw mimofb::ConfigError("run needs a single cell: give one N and one P (or --n/--p)");
      mimofb::check_experiment_config(cfg);
      return do_sweep(run_args, cfg);
    }
    return do_sweep(sweep_args, mimofb::load_experiment_config(sweep_args.config));
  } catch (const mimofb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const mimofb::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}
