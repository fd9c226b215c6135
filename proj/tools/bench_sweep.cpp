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

// Times the serial reference sweep against the OpenMP sweep on the same
// configuration and checks that both produce identical output.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mimofb/config.hpp"
#include "mimofb/parallel.hpp"
#include "mimofb/sweep.hpp"

namespace {

template <class Fn>
double seconds(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

mimofb::ExperimentConfig default_config(std::size_t trials) {
  mimofb::ExperimentConfig cfg;
  cfg.M = 2;
  cfg.K = 1;
  cfg.N_grid = {64, 256};
  cfg.P_grid = {10.0, 100.0};
  cfg.trials = trials;
  cfg.seed = 11;
  cfg.compute_ropt = true;
  mimofb::SchemeConfig rbf;
  rbf.name = "rbf";
  rbf.kind = mimofb::SchemeKind::kRbf;
  cfg.schemes.push_back(rbf);
  mimofb::SchemeConfig zf;
  zf.name = "eigen_zfbf_q8";
  zf.kind = mimofb::SchemeKind::kEigenZfbfQuantized;
  zf.stream = 1;
  zf.t = mimofb::ParamSpec{mimofb::ParamSpec::Rule::kLnN};
  zf.B = 8;
  cfg.schemes.push_back(zf);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP sweep benchmark"};
  std::string config;
  int workers = mimofb::hardware_workers();
  std::size_t trials = 100;
  app.add_option("--config", config, "Sweep configuration (default: built-in)");
  app.add_option("--workers", workers, "OpenMP worker threads")->check(CLI::PositiveNumber);
  app.add_option("--trials", trials, "Trials per cell for the built-in configuration")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const mimofb::ExperimentConfig cfg =
      config.empty() ? default_config(trials) : mimofb::load_experiment_config(config);

  mimofb::SweepResult serial;
  mimofb::SweepResult parallel;
  const double t_serial = seconds([&] { serial = mimofb::run_sweep_serial(cfg); });
  const double t_parallel = seconds([&] { parallel = mimofb::run_sweep(cfg, workers); });
  const bool identical = mimofb::format_csv(serial) == mimofb::format_csv(parallel) &&
                         mimofb::summary_json(serial).dump() == mimofb::summary_json(parallel).dump();

  std::cout << "cells: " << serial.cells.size() << ", trials per cell: " << cfg.trials << '\n'
            << "serial reference: " << t_serial << " s\n"
            << "openmp (" << workers << " workers): " << t_parallel << " s\n"
            << "speedup: " << t_serial / t_parallel << "x\n"
            << "outputs identical: " << (identical ? "yes" : "NO") << '\n';
  return identical ? 0 : 1;
}
