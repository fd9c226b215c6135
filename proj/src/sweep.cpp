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

#include "mimofb/sweep.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "mimofb/asymptotics.hpp"
#include "mimofb/capacity.hpp"
#include "mimofb/errors.hpp"
#include "mimofb/parallel.hpp"

namespace mimofb {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct MeanStderr {
  double mean = kNaN;
  double stderr_ = kNaN;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  CompensatedSum sum;
  for (double x : xs) sum.add(x);
  const double n = static_cast<double>(xs.size());
  out.mean = sum.value() / n;
  if (xs.size() < 2) return out;
  CompensatedSum sq;
  for (double x : xs) sq.add((x - out.mean) * (x - out.mean));
  out.stderr_ = std::sqrt(sq.value() / (n - 1.0)) / std::sqrt(n);
  return out;
}

double mean_of(const std::vector<double>& xs) { return mean_stderr(xs).mean; }

struct SchemeTrial {
  double sum_rate = 0.0;
  double bits = 0.0;
  double users = 0.0;
  bool fallback = false;
  std::size_t alignment_checks = 0;
  std::size_t alignment_violations = 0;
};

struct TrialOutput {
  std::vector<double> ropt;                    // per P, NaN when skipped
  std::vector<std::vector<SchemeTrial>> runs;  // [P][scheme]
};

TrialOutput run_trial(const ExperimentConfig& cfg, std::size_t N, std::size_t trial) {
  const Snapshot snap = sample_snapshot(snapshot_seed(cfg.seed, N, trial), N, cfg.M, cfg.K, 1);
  TrialOutput out;
  out.ropt.assign(cfg.P_grid.size(), kNaN);
  out.runs.resize(cfg.P_grid.size());
  const bool with_ropt = cfg.compute_ropt && trial % cfg.ropt_every == 0;
  for (std::size_t p = 0; p < cfg.P_grid.size(); ++p) {
    const double P = cfg.P_grid[p];
    if (with_ropt) out.ropt[p] = dual_mac_sum_capacity(snap.users, P).value;
    for (const auto& scheme : cfg.schemes) {
      Rng rng = make_rng(scheme_seed(snap.seed, P, scheme.stream));
      const SchemeOutcome o = run_scheme(scheme, snap, P, rng);
      SchemeTrial r;
      r.sum_rate = o.sum_rate;
      r.bits = static_cast<double>(o.feedback.total_bits());
      r.users = static_cast<double>(o.feedback.users_signaling());
      r.fallback = o.fallback_used;
      for (std::size_t i = 0; i < o.alignment.size(); ++i) {
        ++r.alignment_checks;
        if (o.alignment[i] < o.alignment_bound[i]) ++r.alignment_violations;
      }
      out.runs[p].push_back(r);
    }
  }
  return out;
}

void aggregate(const ExperimentConfig& cfg, std::size_t N, const std::vector<TrialOutput>& trials,
               SweepResult& result) {
  for (std::size_t p = 0; p < cfg.P_grid.size(); ++p) {
    std::vector<double> ropt;
    for (const auto& t : trials)
      if (!std::isnan(t.ropt[p])) ropt.push_back(t.ropt[p]);
    const MeanStderr ropt_stats = mean_stderr(ropt);

    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
      CellStats cell;
      cell.scheme = cfg.schemes[s].name;
      cell.M = cfg.M;
      cell.K = cfg.K;
      cell.N = N;
      cell.P = cfg.P_grid[p];
      cell.trials = trials.size();
      std::vector<double> rates;
      std::vector<double> bits;
      std::vector<double> users;
      std::vector<double> fallback;
      for (const auto& t : trials) {
        const SchemeTrial& r = t.runs[p][s];
        rates.push_back(r.sum_rate);
        bits.push_back(r.bits);
        users.push_back(r.users);
        fallback.push_back(r.fallback ? 1.0 : 0.0);
        cell.alignment_checks += r.alignment_checks;
        cell.alignment_violations += r.alignment_violations;
        if (!std::isnan(t.ropt[p])) {
          ++cell.bound_checks;
          if (r.sum_rate > t.ropt[p] + kCapacityBoundSlack) ++cell.bound_violations;
        }
      }
      const MeanStderr rate_stats = mean_stderr(rates);
      cell.mean_sum_rate = rate_stats.mean;
      cell.stderr_sum_rate = rate_stats.stderr_;
      cell.mean_feedback_bits = mean_of(bits);
      cell.mean_users_signaling = mean_of(users);
      cell.fallback_frac = mean_of(fallback);
      cell.mean_ropt = ropt_stats.mean;
      cell.stderr_ropt = ropt_stats.stderr_;
      cell.ropt_trials = ropt.size();
      result.cells.push_back(cell);
      result.trial_sum_rates.push_back(std::move(rates));
    }
  }
}

template <class Loop>
SweepResult sweep_with(const ExperimentConfig& cfg, Loop&& loop) {
  check_experiment_config(cfg);
  SweepResult result;
  result.config = cfg;
  for (auto N : cfg.N_grid) {
    std::vector<TrialOutput> trials(cfg.trials);
    loop(cfg.trials, [&](std::size_t t) { trials[t] = run_trial(cfg, N, t); });
    aggregate(cfg, N, trials, result);
  }
  return result;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& v) { return v.is_null() ? kNaN : v.get<double>(); }

}  // namespace

std::uint64_t snapshot_seed(std::uint64_t seed, std::size_t N, std::size_t trial) {
  return derive_seed(seed, {N, trial});
}

std::uint64_t scheme_seed(std::uint64_t snapshot, double P, std::uint64_t stream) {
  return derive_seed(snapshot, {stream::kScheme, std::bit_cast<std::uint64_t>(P), stream});
}

SchemeOutcome run_scheme(const SchemeConfig& scheme, const Snapshot& snap, double P, Rng& rng) {
  const auto [N, M, K] = snap.dims;
  auto value = [&](const std::optional<ParamSpec>& p) { return p->resolve(N, M, K, P); };
  switch (scheme.kind) {
    case SchemeKind::kRbf: return run_rbf(snap, P, rng, {std::nullopt, scheme.sinr_bits});
    case SchemeKind::kRbfThreshold: return run_rbf(snap, P, rng, {value(scheme.t), scheme.sinr_bits});
    case SchemeKind::kEigenZfbf: return run_threshold_eigen_zfbf(snap, P, value(scheme.t), rng);
    case SchemeKind::kEigenZfbfQuantized:
      return run_threshold_eigen_zfbf(snap, P, value(scheme.t), rng, {scheme.B});
    case SchemeKind::kAlgorithmA:
      return run_algorithm_A(snap, P, {value(scheme.t), value(scheme.beta), value(scheme.eps), *scheme.B}, rng);
    case SchemeKind::kAlgorithmB: return run_algorithm_B(snap, P, {value(scheme.t), value(scheme.eps)}, rng);
    case SchemeKind::kLowSnrRvq: return run_low_snr_rvq(snap, P, *scheme.f_target, rng);
  }
  throw InvalidConfiguration("run_scheme: unknown scheme");
}

SweepResult run_sweep(const ExperimentConfig& cfg, int workers) {
  return sweep_with(cfg, [workers](std::size_t n, auto&& fn) { parallel_for(n, workers, fn); });
}

SweepResult run_sweep_serial(const ExperimentConfig& cfg) {
  return sweep_with(cfg, [](std::size_t n, auto&& fn) { serial_for(n, fn); });
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_csv(const SweepResult& result) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& c : result.cells) {
    os << c.scheme << ',' << c.M << ',' << c.K << ',' << c.N << ',' << format_double(c.P) << ','
       << c.trials << ',' << format_double(c.mean_sum_rate) << ',' << format_double(c.stderr_sum_rate)
       << ',' << format_double(c.mean_feedback_bits) << ',' << format_double(c.mean_users_signaling)
       << ',' << format_double(c.fallback_frac) << ',' << format_double(c.mean_ropt) << '\n';
  }
  return os.str();
}

json summary_json(const SweepResult& result) {
  json cells = json::array();
  for (const auto& c : result.cells) {
    json prediction = nullptr;
    if (c.M >= 2 && c.N >= 3) {
      const ScalingPrediction pred = predict_ropt(c.M, c.P, static_cast<double>(c.N));
      prediction = {{"label", pred.label}, {"regime", to_string(pred.regime)}, {"value", pred.value}};
    }
    cells.push_back({{"scheme", c.scheme},
                     {"M", c.M},
                     {"K", c.K},
                     {"N", c.N},
                     {"P", c.P},
                     {"trials", c.trials},
                     {"mean_sum_rate_nats", number_or_null(c.mean_sum_rate)},
                     {"stderr_nats", number_or_null(c.stderr_sum_rate)},
                     {"mean_feedback_bits", number_or_null(c.mean_feedback_bits)},
                     {"mean_users_signaling", number_or_null(c.mean_users_signaling)},
                     {"fallback_frac", number_or_null(c.fallback_frac)},
                     {"mean_ropt_nats", number_or_null(c.mean_ropt)},
                     {"stderr_ropt_nats", number_or_null(c.stderr_ropt)},
                     {"ropt_trials", c.ropt_trials},
                     {"bound_checks", c.bound_checks},
                     {"bound_violations", c.bound_violations},
                     {"alignment_checks", c.alignment_checks},
                     {"alignment_violations", c.alignment_violations},
                     {"prediction", prediction}});
  }
  return {{"format", "mimofb-sweep-summary"},
          {"version", 1},
          {"units", {{"rate", "nats"}, {"feedback", "bits"}}},
          {"config", to_json(result.config)},
          {"ropt_every", result.config.ropt_every},
          {"cells", cells}};
}

void emit_results(const SweepResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
  };
  write(dir / "results.csv", format_csv(result));
  write(dir / "summary.json", summary_json(result).dump(2) + "\n");
}

SweepResult load_summary(const json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "mimofb-sweep-summary")
    throw ConfigError("load_summary: not a sweep summary document");
  SweepResult result;
  result.config = parse_experiment_config(doc.at("config"));
  for (const auto& j : doc.at("cells")) {
    CellStats c;
    c.scheme = j.at("scheme").get<std::string>();
    c.M = j.at("M").get<std::size_t>();
    c.K = j.at("K").get<std::size_t>();
    c.N = j.at("N").get<std::size_t>();
    c.P = j.at("P").get<double>();
    c.trials = j.at("trials").get<std::size_t>();
    c.mean_sum_rate = number_from(j.at("mean_sum_rate_nats"));
    c.stderr_sum_rate = number_from(j.at("stderr_nats"));
    c.mean_feedback_bits = number_from(j.at("mean_feedback_bits"));
    c.mean_users_signaling = number_from(j.at("mean_users_signaling"));
    c.fallback_frac = number_from(j.at("fallback_frac"));
    c.mean_ropt = number_from(j.at("mean_ropt_nats"));
    c.stderr_ropt = number_from(j.at("stderr_ropt_nats"));
    c.ropt_trials = j.at("ropt_trials").get<std::size_t>();
    c.bound_checks = j.at("bound_checks").get<std::size_t>();
    c.bound_violations = j.at("bound_violations").get<std::size_t>();
    c.alignment_checks = j.at("alignment_checks").get<std::size_t>();
    c.alignment_violations = j.at("alignment_violations").get<std::size_t>();
    result.cells.push_back(c);
  }
  return result;
}

}  // namespace mimofb
