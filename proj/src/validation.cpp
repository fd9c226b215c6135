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

#include "mimofb/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mimofb/asymptotics.hpp"
#include "mimofb/capacity.hpp"
#include "mimofb/channel.hpp"
#include "mimofb/config.hpp"
#include "mimofb/errors.hpp"
#include "mimofb/parallel.hpp"
#include "mimofb/quantize.hpp"
#include "mimofb/schemes.hpp"
#include "mimofb/sweep.hpp"

namespace mimofb {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool faulty(const ValidationOptions& o, const char* name) { return o.inject_fault == name; }

std::uint64_t check_key(const ValidationOptions& o, int criterion, std::uint64_t sub) {
  return derive_seed(o.seed, {stream::kValidation, static_cast<std::uint64_t>(criterion), sub});
}

/// n samples produced `per_draw` at a time. Draws are grouped in fixed-size
/// chunks with their own streams, so the samples do not depend on the
/// worker count.
std::vector<double> draw_samples(std::size_t n, std::size_t per_draw, std::uint64_t key, int workers,
                                 const std::function<void(Rng&, double*)>& draw) {
  constexpr std::size_t kChunk = 2048;
  const std::size_t draws = (n + per_draw - 1) / per_draw;
  const std::size_t chunks = (draws + kChunk - 1) / kChunk;
  std::vector<double> out(draws * per_draw);
  parallel_for(chunks, workers, [&](std::size_t c) {
    Rng rng = make_rng(derive_seed(key, c));
    const std::size_t end = std::min(draws, (c + 1) * kChunk);
    for (std::size_t d = c * kChunk; d < end; ++d) draw(rng, out.data() + d * per_draw);
  });
  out.resize(n);
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

CheckResult make_check(int criterion, std::string name, double statistic, std::string relation,
                       double threshold, std::size_t samples, std::string detail = {}) {
  CheckResult c;
  c.criterion = criterion;
  c.name = std::move(name);
  c.statistic = statistic;
  c.relation = std::move(relation);
  c.threshold = threshold;
  c.samples = samples;
  c.critical_value = kNaN;
  c.detail = std::move(detail);
  if (c.relation == "<") c.pass = statistic < threshold;
  else if (c.relation == "<=") c.pass = statistic <= threshold;
  else if (c.relation == ">=") c.pass = statistic >= threshold;
  else if (c.relation == "==") c.pass = statistic == threshold;
  else throw InvalidInput("make_check: unknown relation");
  if (std::isnan(statistic)) c.pass = false;
  return c;
}

CheckResult ks_check(int criterion, std::string name, const std::vector<double>& samples,
                     const std::function<double(double)>& cdf, double threshold) {
  const double d = ks_distance(samples, cdf);
  CheckResult c = make_check(criterion, std::move(name), d, "<", threshold, samples.size());
  c.critical_value = 1.628 / std::sqrt(static_cast<double>(samples.size()));
  return c;
}

void record_bounds(const SweepResult& r, BoundLedger& ledger) {
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    ledger.checks += r.cells[i].bound_checks;
    ledger.violations += r.cells[i].bound_violations;
  }
}

SchemeConfig scheme(SchemeKind kind, std::string name, std::uint64_t stream) {
  SchemeConfig s;
  s.kind = kind;
  s.name = std::move(name);
  s.stream = stream;
  return s;
}

ParamSpec ln_n(double scale) {
  ParamSpec p;
  p.rule = ParamSpec::Rule::kLnN;
  p.scale = scale;
  return p;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> criterion_row_norms(const ValidationOptions& o, BoundLedger&) {
  std::vector<CheckResult> out;
  const std::pair<std::size_t, std::size_t> dims[] = {{2, 1}, {3, 2}, {4, 4}};
  std::uint64_t sub = 0;
  for (auto [M, K] : dims) {
    const auto samples = draw_samples(o.budget.row_norm_samples, K, check_key(o, 1, sub++), o.workers,
                                      [M = M, K = K](Rng& rng, double* dst) {
                                        const CMatrix h = complex_gaussian_matrix(
                                            rng, static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(M));
                                        for (Eigen::Index r = 0; r < h.rows(); ++r) dst[r] = h.row(r).squaredNorm();
                                      });
    const std::size_t ref_m = faulty(o, "row_norm_cdf") ? M + 1 : M;
    out.push_back(ks_check(1, "row_norm_ks M=" + std::to_string(M) + " K=" + std::to_string(K), samples,
                           [ref_m](double x) { return row_norm_sq_cdf(std::max(0.0, x), ref_m); }, 0.01));
  }
  return out;
}

std::vector<CheckResult> criterion_rbf_sinr(const ValidationOptions& o, BoundLedger&) {
  std::vector<CheckResult> out;
  const std::pair<std::size_t, double> cases[] = {{2, 10.0}, {4, 1.0}};
  std::uint64_t sub = 0;
  for (auto [M, P] : cases) {
    const auto samples = draw_samples(o.budget.sinr_samples, 1, check_key(o, 2, sub++), o.workers,
                                      [M = M, P = P](Rng& rng, double* dst) {
                                        const auto dim = static_cast<Eigen::Index>(M);
                                        const CMatrix beams = haar_unitary(rng, dim);
                                        const CMatrix row = complex_gaussian_matrix(rng, 1, dim);
                                        dst[0] = rbf_sinrs(row.row(0), beams, P)(0);
                                      });
    const std::size_t ref_m = faulty(o, "rbf_sinr_cdf") ? M + 1 : M;
    out.push_back(ks_check(2, "rbf_sinr_ks M=" + std::to_string(M) + " P=" + fmt(P), samples,
                           [ref_m, P = P](double x) { return rbf_sinr_cdf(x, ref_m, P); }, 0.01));
  }
  return out;
}

std::vector<CheckResult> criterion_lambda_tail(const ValidationOptions& o, BoundLedger&) {
  const double t = 10.0;
  const auto hits = draw_samples(o.budget.tail_samples, 1, check_key(o, 3, 0), o.workers,
                                 [t](Rng& rng, double* dst) {
                                   dst[0] = sample_channel(rng, 2, 2).lambda_max() > t ? 1.0 : 0.0;
                                 });
  double count = 0.0;
  for (double h : hits) count += h;
  const double empirical = count / static_cast<double>(hits.size());
  double approx = lambda_max_tail_approx(t, 2, 2);
  if (faulty(o, "lambda_tail")) approx *= 2.0;
  const double exact = std::exp(-t) * (t * t + 2.0) - std::exp(-2.0 * t);
  const double rel = std::abs(empirical / approx - 1.0);
  return {make_check(3, "lambda_max_tail t=10 M=K=2", rel, "<=", 0.15, hits.size(),
                     "empirical=" + fmt(empirical) + " approx=" + fmt(approx) + " exact=" + fmt(exact))};
}

std::vector<CheckResult> criterion_rvq(const ValidationOptions& o, BoundLedger&) {
  std::vector<CheckResult> out;
  auto theta_draw = [](std::size_t M, std::size_t L) {
    return [M, L](Rng& rng, double* dst) {
      const CVector v = random_unit_vector(rng, static_cast<Eigen::Index>(M));
      const Codebook cb = make_codebook(rng, L, M);
      dst[0] = quantize_vector(v, cb).alignment;
    };
  };
  const std::pair<std::size_t, std::size_t> ks_cases[] = {{2, 16}, {3, 64}};
  std::uint64_t sub = 0;
  for (auto [M, L] : ks_cases) {
    const auto samples = draw_samples(o.budget.rvq_ks_samples, 1, check_key(o, 4, sub++), o.workers,
                                      theta_draw(M, L));
    const std::size_t ref_l = faulty(o, "theta_cdf") ? 2 * L : L;
    out.push_back(ks_check(4, "theta_ks M=" + std::to_string(M) + " L=" + std::to_string(L), samples,
                           [M = M, ref_l](double x) { return theta_cdf(std::clamp(x, 0.0, 1.0), M, ref_l); },
                           0.015));
  }
  for (std::size_t M : {2, 3, 4}) {
    for (std::size_t L : {1, 4, 16, 64}) {
      const auto samples = draw_samples(o.budget.theta_mean_samples, 1, check_key(o, 4, sub++), o.workers,
                                        theta_draw(M, L));
      double sum = 0.0;
      for (double x : samples) sum += x;
      const double mean = sum / static_cast<double>(samples.size());
      out.push_back(make_check(4, "theta_mean M=" + std::to_string(M) + " L=" + std::to_string(L), mean, ">=",
                               expected_theta_lower_bound(M, L), samples.size(),
                               "exact_mean=" + fmt(expected_theta(M, L))));
    }
  }
  return out;
}

std::vector<CheckResult> criterion_residual(const ValidationOptions& o, BoundLedger&) {
  std::vector<CheckResult> out;
  const std::size_t M = 3;
  const std::size_t i = 1;
  std::uint64_t sub = 0;
  for (std::size_t N : {4, 8}) {
    for (std::size_t L : {2, 8}) {
      const auto samples = draw_samples(o.budget.residual_trials, 1, check_key(o, 5, sub++), o.workers,
                                        [=](Rng& rng, double* dst) { dst[0] = simulate_epsilon_residual(rng, M, i, N, L); });
      const double n = static_cast<double>(samples.size());
      for (double theta : {0.05, 0.1, 0.2}) {
        double above = 0.0;
        for (double x : samples) above += x > theta ? 1.0 : 0.0;
        const double p = above / n;
        const double se = std::sqrt(p * (1.0 - p) / n);
        double bound = epsilon_error_prob_lower_bound(theta, static_cast<double>(L), M, i, N);
        if (faulty(o, "residual_bound")) bound = std::min(1.0, bound + 0.5);
        out.push_back(make_check(5,
                                 "residual_bound N=" + std::to_string(N) + " L=" + std::to_string(L) + " theta=" + fmt(theta),
                                 p, ">=", bound - 2.0 * se, samples.size(),
                                 "bound=" + fmt(bound) + " stderr=" + fmt(se)));
      }
    }
  }
  return out;
}

// Brute-force maximum of ln|I + p h1^H h1 + (P - p) h2^H h2| over p on a
// grid of step P / steps.
double two_user_grid_max(const ChannelMatrix& a, const ChannelMatrix& b, double P, std::size_t steps) {
  const CMatrix ga = a.entries().adjoint() * a.entries();
  const CMatrix gb = b.entries().adjoint() * b.entries();
  double best = -1.0;
  for (std::size_t s = 0; s <= steps; ++s) {
    const double p = P * static_cast<double>(s) / static_cast<double>(steps);
    const CMatrix m = CMatrix::Identity(2, 2) + p * ga + (P - p) * gb;
    const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    best = std::max(best, std::log(det));
  }
  return best;
}

std::vector<CheckResult> criterion_waterfill(const ValidationOptions& o, BoundLedger&) {
  std::vector<CheckResult> out;
  std::uint64_t sub = 0;
  for (double P : {1.0, 10.0}) {
    std::vector<double> diff(o.budget.waterfill_instances);
    const std::uint64_t key = check_key(o, 6, sub++);
    const bool fault = faulty(o, "waterfill");
    parallel_for(diff.size(), o.workers, [&](std::size_t n) {
      Rng rng = make_rng(derive_seed(key, n));
      std::vector<ChannelMatrix> users{sample_channel(rng, 1, 2), sample_channel(rng, 1, 2)};
      const double solver = dual_mac_sum_capacity(users, fault ? 1.1 * P : P).value;
      diff[n] = std::abs(solver - two_user_grid_max(users[0], users[1], P, 10000));
    });
    out.push_back(make_check(6, "waterfill_vs_grid P=" + fmt(P), *std::max_element(diff.begin(), diff.end()), "<=",
                             1e-3, diff.size(), "max |solver - grid| over instances"));
  }
  return out;
}

std::vector<CheckResult> criterion_upper_bound(const ValidationOptions& o, BoundLedger& ledger) {
  auto base = [&](std::size_t M, std::size_t K, std::vector<std::size_t> ns) {
    ExperimentConfig cfg;
    cfg.M = M;
    cfg.K = K;
    cfg.N_grid = std::move(ns);
    cfg.P_grid = {1.0, 10.0, 100.0};
    cfg.trials = o.budget.bound_trials;
    cfg.seed = check_key(o, 7, M * 10 + K);
    cfg.compute_ropt = true;
    return cfg;
  };
  std::vector<ExperimentConfig> configs;
  {
    ExperimentConfig cfg = base(2, 1, {8, 32});
    cfg.schemes.push_back(scheme(SchemeKind::kRbf, "rbf", 0));
    SchemeConfig thr = scheme(SchemeKind::kRbfThreshold, "rbf_threshold", 1);
    thr.t = ParamSpec{ParamSpec::Rule::kRbfTarget, 0.0, 1.0, 4.0, 1.0, 1.0};
    cfg.schemes.push_back(thr);
    SchemeConfig zf = scheme(SchemeKind::kEigenZfbf, "eigen_zfbf", 2);
    zf.t = ln_n(0.5);
    cfg.schemes.push_back(zf);
    SchemeConfig zq = scheme(SchemeKind::kEigenZfbfQuantized, "eigen_zfbf_q6", 2);
    zq.t = ln_n(0.5);
    zq.B = 6;
    cfg.schemes.push_back(zq);
    SchemeConfig a = scheme(SchemeKind::kAlgorithmA, "algorithm_a", 3);
    a.t = ParamSpec::constant(0.0);
    a.beta = ParamSpec::constant(0.3);
    a.eps = ParamSpec::constant(0.3);
    a.B = 6;
    cfg.schemes.push_back(a);
    SchemeConfig low = scheme(SchemeKind::kLowSnrRvq, "low_snr_rvq", 4);
    low.f_target = 16.0;
    cfg.schemes.push_back(low);
    configs.push_back(cfg);
  }
  {
    ExperimentConfig cfg = base(2, 2, {8, 32});
    cfg.schemes.push_back(scheme(SchemeKind::kRbf, "rbf", 0));
    SchemeConfig zf = scheme(SchemeKind::kEigenZfbf, "eigen_zfbf", 1);
    zf.t = ln_n(0.5);
    cfg.schemes.push_back(zf);
    SchemeConfig b = scheme(SchemeKind::kAlgorithmB, "algorithm_b", 2);
    b.t = ParamSpec::constant(1.0);
    b.eps = ParamSpec::constant(0.3);
    cfg.schemes.push_back(b);
    SchemeConfig low = scheme(SchemeKind::kLowSnrRvq, "low_snr_rvq", 3);
    low.f_target = 16.0;
    cfg.schemes.push_back(low);
    configs.push_back(cfg);
  }
  {
    ExperimentConfig cfg = base(3, 1, {16});
    SchemeConfig a = scheme(SchemeKind::kAlgorithmA, "algorithm_a", 0);
    a.t = ParamSpec::constant(0.0);
    a.beta = ParamSpec::constant(0.4);
    a.eps = ParamSpec::constant(0.4);
    a.B = 6;
    cfg.schemes.push_back(a);
    cfg.schemes.push_back(scheme(SchemeKind::kRbf, "rbf", 1));
    configs.push_back(cfg);
  }
  for (const auto& cfg : configs) record_bounds(run_sweep(cfg, o.workers), ledger);

  return {make_check(7, "sum_rate_le_dual_mac", static_cast<double>(ledger.violations), "==", 0.0, ledger.checks,
                     "per-trial checks across every sweep in the suite")};
}

std::vector<CheckResult> criterion_appendix_bound(const ValidationOptions& o, BoundLedger&) {
  const std::size_t trials = o.budget.alg_a_trials;
  const AlgorithmAParams params{0.0, 0.05, 0.02, 8};
  const std::uint64_t seed = check_key(o, 8, 0);
  std::vector<SchemeOutcome> outcomes(trials);
  parallel_for(trials, o.workers, [&](std::size_t t) {
    const Snapshot snap = sample_snapshot(snapshot_seed(seed, 256, t), 256, 3, 1);
    Rng rng = make_rng(scheme_seed(snap.seed, 10.0, 0));
    outcomes[t] = run_algorithm_A(snap, 10.0, params, rng);
  });
  std::size_t ok_trials = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto& out : outcomes) {
    if (out.fallback_used) continue;
    ++ok_trials;
    for (std::size_t i = 0; i < out.alignment.size(); ++i) {
      ++checks;
      const double slack = out.alignment[i] - out.alignment_bound[i];
      min_slack = std::min(min_slack, slack);
      if (slack < 0.0) ++violations;
    }
  }
  // Fraction of checked streams meeting the bound; NaN (a failure) when no
  // trial got past the fallback, since the check would be vacuous.
  const double frac =
      checks ? static_cast<double>(checks - violations) / static_cast<double>(checks) : kNaN;
  return {make_check(8, "alignment_bound_holds", frac, ">=", 1.0, checks,
                     "non_fallback_trials=" + std::to_string(ok_trials) + "/" + std::to_string(trials) +
                         " violations=" + std::to_string(violations) + " min_slack=" + fmt(min_slack))};
}

ExperimentConfig rate_config(const ValidationOptions& o, int criterion, std::vector<std::size_t> ns,
                             std::vector<double> ps, std::size_t trials) {
  ExperimentConfig cfg;
  cfg.M = 2;
  cfg.K = 1;
  cfg.N_grid = std::move(ns);
  cfg.P_grid = std::move(ps);
  cfg.trials = trials;
  cfg.seed = check_key(o, criterion, 0);
  cfg.compute_ropt = true;
  cfg.schemes.push_back(scheme(SchemeKind::kRbf, "rbf", 0));
  return cfg;
}

std::vector<CheckResult> criterion_diversity(const ValidationOptions& o, BoundLedger& ledger) {
  const ExperimentConfig cfg = rate_config(o, 9, {16, 64, 256, 1024}, {10.0}, o.budget.diversity_trials);
  const SweepResult r = run_sweep(cfg, o.workers);
  record_bounds(r, ledger);
  std::vector<CheckResult> out;
  for (std::size_t i = 1; i < r.cells.size(); ++i) {
    const CellStats& a = r.cells[i - 1];
    const CellStats& b = r.cells[i];
    const double inc = b.mean_ropt - a.mean_ropt;
    const double se = std::hypot(a.stderr_ropt, b.stderr_ropt);
    std::ostringstream detail;
    detail << "ropt(N=" << a.N << ")=" << fmt(a.mean_ropt) << " ropt(N=" << b.N << ")=" << fmt(b.mean_ropt)
           << " asymptote(N=" << b.N << ")=" << fmt(ropt_asymptote(2, 10.0, static_cast<double>(b.N)));
    out.push_back(make_check(9, "ropt_increase N=" + std::to_string(a.N) + "->" + std::to_string(b.N), inc, ">=",
                             2.0 * se, a.ropt_trials + b.ropt_trials, detail.str()));
    // Strict inequality: a zero increase never passes.
    if (!(inc > 2.0 * se)) out.back().pass = false;
  }
  return out;
}

std::vector<CheckResult> criterion_rbf_saturation(const ValidationOptions& o, BoundLedger& ledger) {
  const ExperimentConfig cfg = rate_config(o, 10, {64}, {1e3, 1e4}, o.budget.saturation_trials);
  const SweepResult r = run_sweep(cfg, o.workers);
  record_bounds(r, ledger);
  const CellStats& lo = r.cells[0];
  const CellStats& hi = r.cells[1];
  const double d_rbf = hi.mean_sum_rate - lo.mean_sum_rate;
  const double d_opt = hi.mean_ropt - lo.mean_ropt;
  std::ostringstream detail;
  detail << "rbf " << fmt(lo.mean_sum_rate) << " -> " << fmt(hi.mean_sum_rate) << ", ropt " << fmt(lo.mean_ropt)
         << " -> " << fmt(hi.mean_ropt);
  return {make_check(10, "rbf_increase_lt_half_ropt_increase", d_rbf, "<", 0.5 * d_opt, lo.trials, detail.str())};
}

std::vector<CheckResult> criterion_quantized_gap(const ValidationOptions& o, BoundLedger& ledger) {
  ExperimentConfig cfg;
  cfg.M = 2;
  cfg.K = 1;
  cfg.N_grid = {256};
  cfg.P_grid = {100.0};
  cfg.trials = o.budget.gap_trials;
  cfg.seed = check_key(o, 11, 0);
  cfg.compute_ropt = true;
  // Every variant shares stream 0, so each trial selects the same users
  // and the gaps are paired.
  SchemeConfig ideal = scheme(SchemeKind::kEigenZfbf, "eigen_zfbf", 0);
  ideal.t = ln_n(1.0);
  cfg.schemes.push_back(ideal);
  const std::uint64_t bits[] = {4, 8, 12, 16};
  for (auto B : bits) {
    SchemeConfig q = scheme(SchemeKind::kEigenZfbfQuantized, "eigen_zfbf_q" + std::to_string(B), 0);
    q.t = ln_n(1.0);
    q.B = B;
    cfg.schemes.push_back(q);
  }
  const SweepResult r = run_sweep(cfg, o.workers);
  record_bounds(r, ledger);

  std::vector<double> gaps;
  std::vector<double> gap_se;
  for (std::size_t s = 1; s < r.cells.size(); ++s) {
    std::vector<double> d(r.trial_sum_rates[0].size());
    for (std::size_t t = 0; t < d.size(); ++t) d[t] = r.trial_sum_rates[0][t] - r.trial_sum_rates[s][t];
    double sum = 0.0;
    for (double x : d) sum += x;
    const double mean = sum / static_cast<double>(d.size());
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    gaps.push_back(mean);
    gap_se.push_back(std::sqrt(ss / static_cast<double>(d.size() - 1) / static_cast<double>(d.size())));
  }
  std::vector<CheckResult> out;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    std::ostringstream detail;
    detail << "gap(B=" << bits[i - 1] << ")=" << fmt(gaps[i - 1]) << " gap(B=" << bits[i] << ")=" << fmt(gaps[i])
           << " stderr=" << fmt(gap_se[i]) << " reference_curve(B=" << bits[i]
           << ")=" << fmt(zf_quantization_gap_bound(static_cast<double>(bits[i]), 100.0, 256.0, 2, default_gap_gamma(2)));
    out.push_back(make_check(11, "gap_decreases B=" + std::to_string(bits[i - 1]) + "->" + std::to_string(bits[i]),
                             gaps[i], "<", gaps[i - 1], cfg.trials, detail.str()));
  }
  out.push_back(make_check(11, "gap_small B=16", gaps.back(), "<", 0.05, cfg.trials,
                           "reference_curve(B=16)=" +
                               fmt(zf_quantization_gap_bound(16.0, 100.0, 256.0, 2, default_gap_gamma(2)))));
  return out;
}

std::vector<CheckResult> criterion_empty_set(const ValidationOptions& o, BoundLedger&) {
  const std::size_t N = 512;
  const std::size_t M = 2;
  const double P = 10.0;
  const double t = algorithm_b_threshold(M, M, static_cast<double>(N));
  const double eps = 1.0 / std::log(static_cast<double>(N));
  const std::size_t trials = o.budget.empty_trials;
  const std::uint64_t seed = check_key(o, 12, 0);
  std::vector<std::vector<std::size_t>> sizes(trials);
  parallel_for(trials, o.workers, [&](std::size_t tr) {
    const Snapshot snap = sample_snapshot(snapshot_seed(seed, N, tr), N, M, M);
    Rng rng = make_rng(scheme_seed(snap.seed, P, 0));
    sizes[tr] = run_algorithm_B(snap, P, {t, eps}, rng).candidate_set_sizes;
  });
  double q = algorithm_b_q(M, M, t, eps);
  if (faulty(o, "empty_prob")) q *= 3.0;
  const EmptyProbability pred = predicted_empty_prob(static_cast<double>(N), q);
  const double n = static_cast<double>(trials);
  double empty_first = 0.0;
  double empty_second = 0.0;
  for (const auto& s : sizes) {
    empty_first += s[0] == 0 ? 1.0 : 0.0;
    empty_second += s[1] == 0 ? 1.0 : 0.0;
  }
  const double p1 = empty_first / n;
  const double se = std::sqrt(pred.exact * (1.0 - pred.exact) / n);
  std::ostringstream detail;
  detail << "empirical=" << fmt(p1) << " predicted=" << fmt(pred.exact) << " exp_form=" << fmt(pred.exponential)
         << " stderr=" << fmt(se) << " stage2_empirical=" << fmt(empty_second / n) << " t=" << fmt(t)
         << " eps=" << fmt(eps);
  return {make_check(12, "stage_empty_probability", std::abs(p1 - pred.exact), "<=", 3.0 * se, trials, detail.str())};
}

std::vector<CheckResult> criterion_determinism(const ValidationOptions& o, BoundLedger& ledger) {
  ExperimentConfig cfg;
  cfg.M = 2;
  cfg.K = 1;
  cfg.N_grid = {16, 32};
  cfg.P_grid = {1.0, 10.0};
  cfg.trials = o.budget.determinism_trials;
  cfg.seed = check_key(o, 13, 0);
  cfg.compute_ropt = true;
  cfg.schemes.push_back(scheme(SchemeKind::kRbf, "rbf", 0));
  SchemeConfig zf = scheme(SchemeKind::kEigenZfbfQuantized, "eigen_zfbf_q6", 1);
  zf.t = ln_n(0.5);
  zf.B = 6;
  cfg.schemes.push_back(zf);
  SchemeConfig a = scheme(SchemeKind::kAlgorithmA, "algorithm_a", 2);
  a.t = ParamSpec::constant(0.0);
  a.beta = ParamSpec::constant(0.3);
  a.eps = ParamSpec::constant(0.3);
  a.B = 6;
  cfg.schemes.push_back(a);

  const SweepResult serial = run_sweep_serial(cfg);
  record_bounds(serial, ledger);
  const std::string csv = format_csv(serial);
  const std::string summary = summary_json(serial).dump(2);
  std::size_t mismatches = 0;
  std::size_t runs = 0;
  for (int workers : {1, 2, 3, std::max(4, o.workers)}) {
    const SweepResult r = run_sweep(cfg, workers);
    ++runs;
    if (format_csv(r) != csv || summary_json(r).dump(2) != summary) ++mismatches;
  }
  return {make_check(13, "sweep_output_identical_across_workers", static_cast<double>(mismatches), "==", 0.0, runs,
                     "worker counts 1, 2, 3 and " + std::to_string(std::max(4, o.workers)) +
                         " against the serial reference")};
}

}  // namespace

ValidationBudget minimum_budget() {
  ValidationBudget b;
  b.row_norm_samples = 30000;
  b.sinr_samples = 30000;
  b.tail_samples = 200000;
  b.rvq_ks_samples = 10000;
  b.theta_mean_samples = 10000;
  b.residual_trials = 1000;
  b.waterfill_instances = 5;
  b.bound_trials = 10;
  b.alg_a_trials = 100;
  b.diversity_trials = 100;
  b.saturation_trials = 100;
  b.gap_trials = 100;
  b.empty_trials = 500;
  b.determinism_trials = 2;
  return b;
}

namespace {

struct BudgetField {
  const char* name;
  std::size_t ValidationBudget::*field;
};

constexpr BudgetField kBudgetFields[] = {
    {"row_norm_samples", &ValidationBudget::row_norm_samples},
    {"sinr_samples", &ValidationBudget::sinr_samples},
    {"tail_samples", &ValidationBudget::tail_samples},
    {"rvq_ks_samples", &ValidationBudget::rvq_ks_samples},
    {"theta_mean_samples", &ValidationBudget::theta_mean_samples},
    {"residual_trials", &ValidationBudget::residual_trials},
    {"waterfill_instances", &ValidationBudget::waterfill_instances},
    {"bound_trials", &ValidationBudget::bound_trials},
    {"alg_a_trials", &ValidationBudget::alg_a_trials},
    {"diversity_trials", &ValidationBudget::diversity_trials},
    {"saturation_trials", &ValidationBudget::saturation_trials},
    {"gap_trials", &ValidationBudget::gap_trials},
    {"empty_trials", &ValidationBudget::empty_trials},
    {"determinism_trials", &ValidationBudget::determinism_trials},
};

}  // namespace

void check_budget(const ValidationBudget& budget) {
  const ValidationBudget min = minimum_budget();
  for (const auto& f : kBudgetFields) {
    if (budget.*(f.field) < min.*(f.field))
      throw ConfigError(std::string("budget.") + f.name + " below documented minimum " +
                        std::to_string(min.*(f.field)));
  }
}

const std::vector<std::string>& fault_names() {
  static const std::vector<std::string> names{"row_norm_cdf", "rbf_sinr_cdf", "lambda_tail", "theta_cdf",
                                              "residual_bound", "waterfill", "empty_prob"};
  return names;
}

ValidationOptions parse_validation_options(const json& doc) {
  if (!doc.is_object()) throw ConfigError("validation config: expected an object");
  ValidationOptions o;
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    const json& v = item.value();
    if (key == "seed") {
      if (!is_json_count(v)) throw ConfigError("seed: expected a nonnegative integer");
      o.seed = v.get<std::uint64_t>();
    } else if (key == "workers") {
      if (!is_json_count(v) || v.get<std::uint64_t>() < 1) throw ConfigError("workers: expected a positive integer");
      o.workers = static_cast<int>(v.get<std::uint64_t>());
    } else if (key == "inject_fault") {
      if (!v.is_string()) throw ConfigError("inject_fault: expected a string");
      o.inject_fault = v.get<std::string>();
      const auto& names = fault_names();
      if (std::find(names.begin(), names.end(), o.inject_fault) == names.end())
        throw ConfigError("inject_fault: unknown target '" + o.inject_fault + "'");
    } else if (key == "budget") {
      if (!v.is_object()) throw ConfigError("budget: expected an object");
      for (const auto& b : v.items()) {
        bool known = false;
        for (const auto& f : kBudgetFields) {
          if (b.key() != f.name) continue;
          if (!is_json_count(b.value())) throw ConfigError(std::string("budget.") + f.name + ": expected a count");
          o.budget.*(f.field) = b.value().get<std::size_t>();
          known = true;
        }
        if (!known) throw ConfigError("budget: unknown key '" + b.key() + "'");
      }
    } else {
      throw ConfigError("validation config: unknown key '" + key + "'");
    }
  }
  check_budget(o.budget);
  return o;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "row-norm distribution", criterion_row_norms},
      {2, "random-beam SINR distribution", criterion_rbf_sinr},
      {3, "largest-eigenvalue tail", criterion_lambda_tail},
      {4, "RVQ alignment law and mean bound", criterion_rvq},
      {5, "quantization residual lower bound", criterion_residual},
      {6, "dual-MAC solver vs grid search", criterion_waterfill},
      {7, "sum rate never exceeds dual-MAC capacity", criterion_upper_bound},
      {8, "Algorithm A alignment inequality", criterion_appendix_bound},
      {9, "multiuser-diversity growth of capacity", criterion_diversity},
      {10, "random-beamforming saturation at high SNR", criterion_rbf_saturation},
      {11, "quantized ZFBF gap decay", criterion_quantized_gap},
      {12, "Algorithm B empty-stage probability", criterion_empty_set},
      {13, "sweep determinism across worker counts", criterion_determinism},
  };
  return all;
}

std::vector<CheckResult> run_validation_suite(const ValidationOptions& options) {
  check_budget(options.budget);
  BoundLedger ledger;
  std::vector<CheckResult> out;
  const Criterion* last = nullptr;
  for (const auto& c : criteria()) {
    if (c.id == 7) {
      last = &c;
      continue;
    }
    auto checks = c.run(options, ledger);
    out.insert(out.end(), checks.begin(), checks.end());
  }
  if (last) {
    auto checks = last->run(options, ledger);
    out.insert(out.end(), checks.begin(), checks.end());
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.criterion < b.criterion; });
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string format_check(const CheckResult& c) {
  std::ostringstream os;
  os << (c.pass ? "PASS" : "FAIL") << " [" << c.criterion << "] " << c.name << ": statistic=" << fmt(c.statistic)
     << ' ' << c.relation << " threshold=" << fmt(c.threshold) << " (n=" << c.samples;
  if (!std::isnan(c.critical_value)) os << ", ks_critical_1pct=" << fmt(c.critical_value);
  os << ')';
  if (!c.detail.empty()) os << " " << c.detail;
  return os.str();
}

json report_json(const std::vector<CheckResult>& checks, const ValidationOptions& options) {
  json budget = json::object();
  for (const auto& f : kBudgetFields) budget[f.name] = options.budget.*(f.field);
  json items = json::array();
  for (const auto& c : checks) {
    items.push_back({{"criterion", c.criterion},
                     {"name", c.name},
                     {"statistic", std::isfinite(c.statistic) ? json(c.statistic) : json(nullptr)},
                     {"relation", c.relation},
                     {"threshold", std::isfinite(c.threshold) ? json(c.threshold) : json(nullptr)},
                     {"samples", c.samples},
                     {"pass", c.pass},
                     {"ks_critical_value", std::isfinite(c.critical_value) ? json(c.critical_value) : json(nullptr)},
                     {"detail", c.detail}});
  }
  return {{"seed", options.seed},
          {"budget", budget},
          {"inject_fault", options.inject_fault},
          {"passed", all_passed(checks)},
          {"checks", items}};
}

}  // namespace mimofb
