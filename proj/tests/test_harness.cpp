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


#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mimofb/config.hpp"
#include "mimofb/errors.hpp"
#include "mimofb/sweep.hpp"
#include "mimofb/validation.hpp"
#include "support.hpp"

using namespace mimofb;
using nlohmann::json;

namespace {

json small_config() {
  return json::parse(R"({
    "M": 2, "K": 1, "N_grid": [8], "P_grid": [10], "trials": 5, "seed": 7,
    "schemes": [{"type": "rbf"}, {"type": "eigen_zfbf", "t": {"rule": "ln_n", "scale": 0.5}}]
  })");
}

bool same_or_both_nan(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mimofb_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("config parsing is strict") {
  CHECK_NOTHROW(parse_experiment_config(small_config()));

  auto rejects = [](json doc) { CHECK_THROWS_AS(parse_experiment_config(doc), ConfigError); };
  {
    json d = small_config();
    d["trails"] = 5;
    rejects(d);
  }
  {
    json d = small_config();
    d.erase("seed");
    rejects(d);
  }
  {
    json d = small_config();
    d["M"] = "two";
    rejects(d);
  }
  {
    json d = small_config();
    d["trials"] = -3;
    rejects(d);
  }
  {
    json d = small_config();
    d["trials"] = 0;
    rejects(d);
  }
  {
    json d = small_config();
    d["K"] = 3;
    rejects(d);
  }
  {
    json d = small_config();
    d["N_grid"] = json::array();
    rejects(d);
  }
  {
    json d = small_config();
    d["P_grid"] = {-1.0};
    rejects(d);
  }
  {
    json d = small_config();
    d["schemes"][0]["beta"] = 0.1;  // not a random-beam parameter
    rejects(d);
  }
  {
    json d = small_config();
    d["schemes"][1].erase("t");
    rejects(d);
  }
  {
    json d = small_config();
    d["schemes"][1]["t"] = {{"rule", "cube_root"}};
    rejects(d);
  }
  {
    json d = small_config();
    d["schemes"].push_back({{"type", "rbf"}});  // duplicate name
    rejects(d);
  }
  {
    json d = small_config();
    d["schemes"].push_back({{"type", "carrier_pigeon"}});
    rejects(d);
  }
  {
    json d = small_config();
    d["schemes"].push_back({{"type", "algorithm_b"}, {"t", 0}, {"eps", 0.1}});  // needs K = M
    rejects(d);
  }
  {
    json d = small_config();
    d["K"] = 2;
    d["schemes"] = {{{"type", "algorithm_a"}, {"t", 0}, {"beta", 0.1}, {"eps", 0.1}, {"B", 4}}};
    rejects(d);  // needs K < M
  }
  {
    json d = small_config();
    d["schemes"] = {{{"type", "algorithm_a"}, {"t", 0}, {"beta", 1.5}, {"eps", 0.1}, {"B", 4}}};
    rejects(d);
  }
  {
    json d = small_config();
    d["schemes"] = {{{"type", "eigen_zfbf_quantized"}, {"t", 0}, {"B", 30}}};
    rejects(d);
  }
  {
    json d = small_config();
    d["schemes"] = {{{"type", "rbf_threshold"}, {"t", {{"rule", "rbf_target"}, {"target", 1e6}}}}};
    rejects(d);  // more expected reports than reporters
  }
  {
    json d = small_config();
    d["N_grid"] = {2};
    d["schemes"] = {{{"type", "low_snr_rvq"}, {"f_target", 16}}};
    rejects(d);
  }
}

TEST_CASE("load_experiment_config errors") {
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/dir/config.json"), IoError);
  const auto dir = scratch_dir("badjson");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "c.json") << "{ not json";
  CHECK_THROWS_AS(load_experiment_config(dir / "c.json"), ConfigError);
}

TEST_CASE("parameter rules") {
  const ExperimentConfig cfg = parse_experiment_config(json::parse(R"({
    "M": 2, "K": 2, "N_grid": [100], "P_grid": [10], "trials": 1, "seed": 1,
    "schemes": [
      {"type": "rbf_threshold", "name": "a", "t": {"rule": "rbf_target", "target": 10}},
      {"type": "eigen_zfbf", "name": "b", "t": {"rule": "ln_n", "scale": 0.8}},
      {"type": "algorithm_b", "name": "c", "t": {"rule": "algorithm_b"}, "eps": {"rule": "inv_ln_n"}},
      {"type": "algorithm_b", "name": "d", "t": 1.5, "eps": {"rule": "delta_over_p_ln_n", "delta": 2}}
    ]})"));
  const double lnN = std::log(100.0);
  CHECK(cfg.schemes[0].t->resolve(100, 2, 2, 10.0) == rbf_threshold_solve(100, 2, 10.0, 10.0, 1.0));
  CHECK(cfg.schemes[1].t->resolve(100, 2, 2, 10.0) == doctest::Approx(0.8 * lnN));
  CHECK(cfg.schemes[2].t->resolve(100, 2, 2, 10.0) ==
        doctest::Approx(lnN + std::log(lnN) - std::log(std::log(lnN))));
  CHECK(cfg.schemes[2].eps->resolve(100, 2, 2, 10.0) == doctest::Approx(1.0 / lnN));
  CHECK(cfg.schemes[3].t->resolve(100, 2, 2, 10.0) == 1.5);
  CHECK(cfg.schemes[3].eps->resolve(100, 2, 2, 10.0) == doctest::Approx(2.0 / (10.0 * lnN)));
  // Streams default to the scheme's position.
  CHECK(cfg.schemes[2].stream == 2);
}

TEST_CASE("config round-trips through JSON") {
  json d = small_config();
  d["compute_ropt"] = true;
  d["ropt_every"] = 2;
  d["schemes"].push_back({{"type", "low_snr_rvq"}, {"f_target", 16.5}, {"stream", 9}});
  const ExperimentConfig cfg = parse_experiment_config(d);
  CHECK(parse_experiment_config(to_json(cfg)) == cfg);
}

TEST_CASE("CSV formatting") {
  SweepResult empty;
  CHECK(format_csv(empty) ==
        std::string("scheme,M,K,N,P,trials,mean_sum_rate_nats,stderr_nats,mean_feedback_bits,"
                    "mean_users_signaling,fallback_frac,mean_ropt_nats\n"));
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  // %.17g round-trips every double.
  testing::for_cases(3, 200, [](Rng& rng, std::size_t) {
    const double x = std::ldexp(testing::uniform_real(rng, -1.0, 1.0), static_cast<int>(testing::uniform_size(rng, 0, 80)) - 40);
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  });

  json d = small_config();
  d["trials"] = 1;
  d["schemes"] = {{{"type", "rbf"}}};
  const SweepResult one = run_sweep(parse_experiment_config(d));
  const std::string csv = format_csv(one);
  const auto lines = split(csv, '\n');
  REQUIRE(lines.size() == 2);
  const auto fields = split(lines[1], ',');
  REQUIRE(fields.size() == 12);
  CHECK(fields[0] == "rbf");
  CHECK(fields[5] == "1");
  // A single trial has no spread estimate, and no capacity was requested.
  CHECK(fields[7] == "nan");
  CHECK(fields[11] == "nan");
  CHECK(std::strtod(fields[6].c_str(), nullptr) == one.cells[0].mean_sum_rate);
}

TEST_CASE("sweep statistics") {
  json d = small_config();
  d["trials"] = 7;
  d["compute_ropt"] = true;
  const ExperimentConfig cfg = parse_experiment_config(d);
  const SweepResult r = run_sweep(cfg);
  REQUIRE(r.cells.size() == 2);
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    const CellStats& c = r.cells[i];
    const std::vector<double>& x = r.trial_sum_rates[i];
    REQUIRE(x.size() == 7);
    CHECK(c.mean_sum_rate == doctest::Approx(testing::mean(x)).epsilon(1e-14));
    CHECK(c.stderr_sum_rate == doctest::Approx(testing::stderr_of(x)).epsilon(1e-12));
    CHECK(c.fallback_frac >= 0.0);
    CHECK(c.fallback_frac <= 1.0);
    CHECK(c.bound_checks == 7);
    CHECK(c.bound_violations == 0);
    CHECK(c.mean_ropt >= c.mean_sum_rate);
  }
  // Same seed, same numbers.
  const SweepResult again = run_sweep(cfg);
  CHECK(again.cells == r.cells);
}

TEST_CASE("trials replay from their seeds") {
  json d = small_config();
  const ExperimentConfig cfg = parse_experiment_config(d);
  const SweepResult r = run_sweep(cfg);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const std::uint64_t snap_seed = snapshot_seed(cfg.seed, 8, t);
    const Snapshot snap = sample_snapshot(snap_seed, 8, 2, 1);
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
      Rng rng = make_rng(scheme_seed(snap_seed, 10.0, cfg.schemes[s].stream));
      CHECK(run_scheme(cfg.schemes[s], snap, 10.0, rng).sum_rate == r.trial_sum_rates[s][t]);
    }
  }
  CHECK(snapshot_seed(1, 8, 0) != snapshot_seed(1, 8, 1));
  CHECK(snapshot_seed(1, 8, 0) != snapshot_seed(1, 16, 0));
  CHECK(scheme_seed(5, 1.0, 0) != scheme_seed(5, 10.0, 0));
}

TEST_CASE("random beamforming mean is estimated to 5% at 400 trials") {
  json d = small_config();
  d["N_grid"] = {64};
  d["trials"] = 400;
  d["schemes"] = {{{"type", "rbf"}}};
  const SweepResult r = run_sweep(parse_experiment_config(d), 2);
  CHECK(r.cells[0].stderr_sum_rate < 0.05 * r.cells[0].mean_sum_rate);
}

TEST_CASE("results files and summary reload") {
  json d = small_config();
  d["trials"] = 1;
  d["compute_ropt"] = true;
  const SweepResult r = run_sweep(parse_experiment_config(d));
  const auto dir = scratch_dir("emit");
  emit_results(r, dir / "nested");
  std::ifstream csv(dir / "nested" / "results.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == kCsvHeader);

  const json doc = read_json_file(dir / "nested" / "summary.json");
  CHECK(doc.at("config") == to_json(r.config));
  const SweepResult back = load_summary(doc);
  CHECK(back.config == r.config);
  REQUIRE(back.cells.size() == r.cells.size());
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    const CellStats& a = r.cells[i];
    const CellStats& b = back.cells[i];
    CHECK(a.scheme == b.scheme);
    CHECK(a.N == b.N);
    CHECK(a.P == b.P);
    CHECK(a.mean_sum_rate == b.mean_sum_rate);
    CHECK(same_or_both_nan(a.stderr_sum_rate, b.stderr_sum_rate));
    CHECK(same_or_both_nan(a.stderr_ropt, b.stderr_ropt));
    CHECK(a.mean_ropt == b.mean_ropt);
    CHECK(a.mean_feedback_bits == b.mean_feedback_bits);
    CHECK(a.bound_checks == b.bound_checks);
  }
  CHECK(format_csv(back) == format_csv(r));
  CHECK_THROWS_AS(load_summary(json::object()), ConfigError);

  // A regular file where the output directory should be.
  std::ofstream(dir / "blocker") << "x";
  CHECK_THROWS_AS(emit_results(r, dir / "blocker" / "out"), IoError);
}

TEST_CASE("validation options") {
  const ValidationBudget min = minimum_budget();
  CHECK_NOTHROW(check_budget(min));
  CHECK_NOTHROW(check_budget(ValidationBudget{}));
  ValidationBudget low = min;
  low.tail_samples -= 1;
  CHECK_THROWS_AS(check_budget(low), ConfigError);

  const ValidationOptions o = parse_validation_options(json::parse(R"({"seed": 3, "workers": 2,
      "budget": {"gap_trials": 500}, "inject_fault": "waterfill"})"));
  CHECK(o.seed == 3);
  CHECK(o.workers == 2);
  CHECK(o.budget.gap_trials == 500);
  CHECK(o.budget.row_norm_samples == ValidationBudget{}.row_norm_samples);
  CHECK(o.inject_fault == "waterfill");
  CHECK_THROWS_AS(parse_validation_options(json::parse(R"({"sed": 3})")), ConfigError);
  CHECK_THROWS_AS(parse_validation_options(json::parse(R"({"budget": {"gap_trails": 500}})")), ConfigError);
  CHECK_THROWS_AS(parse_validation_options(json::parse(R"({"budget": {"gap_trials": 1}})")), ConfigError);
  CHECK_THROWS_AS(parse_validation_options(json::parse(R"({"inject_fault": "gremlin"})")), ConfigError);
  CHECK_THROWS_AS(parse_validation_options(json::parse(R"({"seed": "x"})")), ConfigError);

  REQUIRE(criteria().size() == 13);
  for (std::size_t i = 0; i < criteria().size(); ++i) CHECK(criteria()[i].id == static_cast<int>(i) + 1);
}

TEST_CASE("each injected fault fails its own check") {
  // Criterion targeted by each fault.
  const std::vector<std::pair<std::string, int>> targets{
      {"row_norm_cdf", 1}, {"rbf_sinr_cdf", 2}, {"lambda_tail", 3}, {"theta_cdf", 4},
      {"residual_bound", 5}, {"waterfill", 6},    {"empty_prob", 12}};
  REQUIRE(targets.size() == fault_names().size());
  for (const auto& [fault, id] : targets) {
    CAPTURE(fault);
    ValidationOptions o;
    o.budget = minimum_budget();
    const Criterion& c = criteria()[static_cast<std::size_t>(id - 1)];
    BoundLedger ledger;
    CHECK(all_passed(c.run(o, ledger)));
    o.inject_fault = fault;
    CHECK_FALSE(all_passed(c.run(o, ledger)));
  }
}

TEST_CASE("check formatting") {
  CheckResult c;
  c.criterion = 4;
  c.name = "demo";
  c.statistic = 0.25;
  c.threshold = 0.5;
  c.relation = "<";
  c.samples = 10;
  c.pass = true;
  const std::string line = format_check(c);
  CHECK(line.rfind("PASS [4] demo", 0) == 0);
  c.pass = false;
  CHECK(format_check(c).rfind("FAIL [4] demo", 0) == 0);
  const json report = report_json({c}, ValidationOptions{});
  CHECK(report.dump().find("demo") != std::string::npos);
}
