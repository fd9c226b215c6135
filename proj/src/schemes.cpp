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

#include "mimofb/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mimofb/capacity.hpp"
#include "mimofb/errors.hpp"

namespace mimofb {

namespace {

constexpr std::uint64_t kMaxCodebookBits = 24;

void check_snapshot(const Snapshot& snap, double P, const char* where) {
  if (snap.users.empty()) throw InvalidInput(std::string(where) + ": empty snapshot");
  if (snap.users.size() != snap.dims.N) throw InvalidInput(std::string(where) + ": dims do not match users");
  if (!(P > 0.0) || !std::isfinite(P)) throw DomainError(std::string(where) + ": P must be positive");
}

std::size_t pick_one(const std::vector<std::size_t>& pool, Rng& rng) {
  std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
  return pool[dist(rng)];
}

// `count` distinct members of `pool` in draw order (partial Fisher-Yates).
std::vector<std::size_t> pick_distinct(std::vector<std::size_t> pool, std::size_t count, Rng& rng) {
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> dist(i, pool.size() - 1);
    std::swap(pool[i], pool[dist(rng)]);
  }
  pool.resize(count);
  return pool;
}

std::uint64_t bits_for(std::size_t L) {
  std::uint64_t b = 0;
  while ((std::uint64_t{1} << b) < L) ++b;
  return b;
}

std::vector<std::size_t> above_threshold(const Snapshot& snap, double t) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < snap.users.size(); ++k)
    if (snap.users[k].lambda_max() > t) out.push_back(k);
  return out;
}

void finish(SchemeOutcome& out) {
  out.per_user_rate.clear();
  out.sum_rate = 0.0;
  for (auto& s : out.selected) {
    s.rate = std::max(0.0, s.rate);
    out.per_user_rate.push_back(s.rate);
    out.sum_rate += s.rate;
  }
}

// Columns W = R^H (R R^H)^{-1}, so that R W = I.
CMatrix pseudo_inverse_columns(const CMatrix& rows) {
  const CMatrix gram = rows * rows.adjoint();
  return rows.adjoint() * gram.ldlt().solve(CMatrix::Identity(rows.rows(), rows.rows()));
}

// Squared distance of row j from the span of the other rows.
double distance_to_others(const CMatrix& rows, Eigen::Index j) {
  const Eigen::Index m = rows.rows();
  if (m == 1) return rows.row(0).squaredNorm();
  CMatrix others(m - 1, rows.cols());
  for (Eigen::Index r = 0, o = 0; r < m; ++r)
    if (r != j) others.row(o++) = rows.row(r);
  const CVector target = rows.row(j).adjoint();
  const CMatrix basis = others.adjoint();
  const CVector coeff = basis.colPivHouseholderQr().solve(target);
  return (target - basis * coeff).squaredNorm();
}

// Drops rows nearest to the span of the others until the Gram matrix is
// well conditioned; returns the kept row positions.
std::vector<Eigen::Index> well_conditioned_rows(const CMatrix& rows) {
  std::vector<Eigen::Index> keep(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r) keep[static_cast<std::size_t>(r)] = r;
  auto gather = [&]() {
    CMatrix sub(static_cast<Eigen::Index>(keep.size()), rows.cols());
    for (std::size_t r = 0; r < keep.size(); ++r) sub.row(static_cast<Eigen::Index>(r)) = rows.row(keep[r]);
    return sub;
  };
  CMatrix sub = gather();
  while (keep.size() > 1 && !(gram_condition(sub) < kGramConditionLimit)) {
    Eigen::Index worst = 0;
    double worst_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < sub.rows(); ++r) {
      const double d = distance_to_others(sub, r);
      if (d < worst_dist) {
        worst_dist = d;
        worst = r;
      }
    }
    keep.erase(keep.begin() + worst);
    sub = gather();
  }
  return keep;
}

}  // namespace

void FeedbackTrace::send(std::size_t round, std::size_t user, MessageKind kind, std::uint64_t bits) {
  if (rounds_.empty() || rounds_.back().round != round) rounds_.push_back({round, {}});
  rounds_.back().messages.push_back({user, kind, bits});
  total_bits_ += bits;
  if (kind == MessageKind::kIdealVector || kind == MessageKind::kIdealGain) idealized_ = true;
  const auto pos = std::lower_bound(signaled_.begin(), signaled_.end(), user);
  if (pos == signaled_.end() || *pos != user) {
    signaled_.insert(pos, user);
    users_signaling_ = signaled_.size();
  }
}

std::uint64_t beam_index_bits(std::size_t M) { return bits_for(M); }

double rbf_sinr_cdf(double x, std::size_t M, double P) {
  if (M == 0) throw DomainError("rbf_sinr_cdf: M must be positive");
  if (!(P > 0.0)) throw DomainError("rbf_sinr_cdf: P must be positive");
  if (!(x > 0.0)) return 0.0;
  const double m = static_cast<double>(M);
  return 1.0 - std::exp(-m * x / P - (m - 1.0) * std::log1p(x));
}

RVector rbf_sinrs(const Eigen::RowVectorXcd& row, const CMatrix& beams, double P) {
  const Eigen::RowVectorXcd proj = row * beams;
  const RVector a = proj.cwiseAbs2().transpose();
  const double rho = P / static_cast<double>(beams.cols());
  const double total = a.sum();
  RVector out(a.size());
  for (Eigen::Index m = 0; m < a.size(); ++m) out(m) = rho * a(m) / (1.0 + rho * (total - a(m)));
  return out;
}

SchemeOutcome run_rbf(const Snapshot& snap, double P, Rng& rng, const RbfOptions& options) {
  check_snapshot(snap, P, "run_rbf");
  if (options.threshold && !(*options.threshold >= 0.0))
    throw DomainError("run_rbf: threshold must be nonnegative");
  const std::size_t M = snap.dims.M;
  const CMatrix beams = haar_unitary(rng, static_cast<Eigen::Index>(M));
  const double rho = P / static_cast<double>(M);

  struct Report {
    std::size_t user;
    std::size_t antenna;
    RVector sinr;
  };
  std::vector<Report> reports;
  reports.reserve(snap.users.size() * snap.dims.K);
  for (std::size_t k = 0; k < snap.users.size(); ++k) {
    const CMatrix& h = snap.users[k].entries();
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      reports.push_back({k, static_cast<std::size_t>(i), rbf_sinrs(h.row(i), beams, P)});
  }

  SchemeOutcome out;
  auto schedule = [&](const Report& r, std::size_t m) {
    ScheduledStream s;
    s.user = r.user;
    s.antenna = r.antenna;
    s.beam = m;
    s.power = rho;
    s.direction = beams.col(static_cast<Eigen::Index>(m));
    s.sinr = r.sinr(static_cast<Eigen::Index>(m));
    s.rate = std::log1p(s.sinr);
    out.selected.push_back(std::move(s));
  };

  if (!options.threshold) {
    const std::uint64_t bits = beam_index_bits(M) + options.sinr_bits;
    std::vector<std::size_t> best_beam(reports.size());
    std::size_t global_best = 0;
    for (std::size_t r = 0; r < reports.size(); ++r) {
      Eigen::Index b = 0;
      reports[r].sinr.maxCoeff(&b);
      best_beam[r] = static_cast<std::size_t>(b);
      out.feedback.send(0, reports[r].user, MessageKind::kSinrReport, bits);
      if (reports[r].sinr(b) > reports[global_best].sinr(static_cast<Eigen::Index>(best_beam[global_best])))
        global_best = r;
    }
    for (std::size_t m = 0; m < M; ++m) {
      std::optional<std::size_t> winner;
      for (std::size_t r = 0; r < reports.size(); ++r) {
        if (best_beam[r] != m) continue;
        if (!winner || reports[r].sinr(static_cast<Eigen::Index>(m)) >
                           reports[*winner].sinr(static_cast<Eigen::Index>(m)))
          winner = r;
      }
      if (!winner) {
        out.fallback_used = true;
        winner = global_best;
      }
      schedule(reports[*winner], m);
    }
  } else {
    const double t = *options.threshold;
    const std::uint64_t bits = beam_index_bits(M);
    std::vector<std::vector<std::size_t>> reporters(M);
    for (std::size_t r = 0; r < reports.size(); ++r) {
      for (std::size_t m = 0; m < M; ++m) {
        if (reports[r].sinr(static_cast<Eigen::Index>(m)) > t) {
          reporters[m].push_back(r);
          out.feedback.send(0, reports[r].user, MessageKind::kBeamIndex, bits);
        }
      }
    }
    for (std::size_t m = 0; m < M; ++m) {
      if (reporters[m].empty()) {
        out.fallback_used = true;
        continue;
      }
      schedule(reports[pick_one(reporters[m], rng)], m);
    }
    for (const auto& rep : reporters) out.candidate_set_sizes.push_back(rep.size());
  }
  finish(out);
  return out;
}

double rbf_threshold_solve(std::size_t N, std::size_t M, double P, double target_e_users,
                           double T) {
  if (N == 0 || M == 0) throw DomainError("rbf_threshold_solve: N and M must be positive");
  if (!(P > 0.0)) throw DomainError("rbf_threshold_solve: P must be positive");
  if (!(T >= 1.0)) throw DomainError("rbf_threshold_solve: T must be at least 1");
  if (!(target_e_users > 0.0)) throw InfeasibleTarget("rbf_threshold_solve: target must be positive");
  const double m = static_cast<double>(M);
  const double rhs = target_e_users / (m * static_cast<double>(N) * T);
  if (rhs > 1.0) throw InfeasibleTarget("rbf_threshold_solve: target exceeds the number of reporters");
  if (rhs == 1.0) return 0.0;

  // g(t) = ln(lhs) - ln(rhs) is strictly decreasing with g(0) > 0.
  const double log_rhs = std::log(rhs);
  auto g = [&](double t) { return -m * t / P - (m - 1.0) * std::log1p(t) - log_rhs; };
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SchemeOutcome run_threshold_eigen_zfbf(const Snapshot& snap, double P, double t, Rng& rng,
                                       const ZfbfOptions& options) {
  check_snapshot(snap, P, "run_threshold_eigen_zfbf");
  if (!(t >= 0.0)) throw DomainError("run_threshold_eigen_zfbf: t must be nonnegative");
  if (options.quantization_bits &&
      (*options.quantization_bits < 1 || *options.quantization_bits > kMaxCodebookBits))
    throw InvalidConfiguration("run_threshold_eigen_zfbf: quantization bits outside [1, 24]");
  const std::size_t M = snap.dims.M;

  SchemeOutcome out;
  const std::vector<std::size_t> qualified = above_threshold(snap, t);
  out.candidate_set_sizes.push_back(qualified.size());
  for (auto k : qualified) out.feedback.send(0, k, MessageKind::kMembership, 1);
  if (qualified.empty()) {
    out.fallback_used = true;
    finish(out);
    return out;
  }
  const std::vector<std::size_t> chosen = pick_distinct(qualified, M, rng);

  // Rows the transmitter believes in, and the true effective rows.
  const CMatrix true_rows = EffectiveChannel::from_users(snap.users, chosen).rows;
  CMatrix known_rows = true_rows;
  if (options.quantization_bits) {
    const std::uint64_t B = *options.quantization_bits;
    const Codebook cb = make_codebook(rng, std::size_t{1} << B, M);
    for (std::size_t r = 0; r < chosen.size(); ++r) {
      const ChannelMatrix& user = snap.users[chosen[r]];
      const QuantizationResult q = quantize_vector(user.v_max(), cb);
      known_rows.row(static_cast<Eigen::Index>(r)) =
          std::sqrt(user.lambda_max()) * cb.word(q.index).adjoint();
      out.feedback.send(1, chosen[r], MessageKind::kCodewordIndex, B);
      out.feedback.send(1, chosen[r], MessageKind::kIdealGain, 0);
    }
  } else {
    for (auto k : chosen) out.feedback.send(1, k, MessageKind::kIdealVector, 0);
  }

  const std::vector<Eigen::Index> keep = well_conditioned_rows(known_rows);
  out.zf_reduced = keep.size() < chosen.size();
  const auto m = static_cast<Eigen::Index>(keep.size());
  CMatrix known(m, known_rows.cols());
  CMatrix truth(m, true_rows.cols());
  for (Eigen::Index r = 0; r < m; ++r) {
    known.row(r) = known_rows.row(keep[static_cast<std::size_t>(r)]);
    truth.row(r) = true_rows.row(keep[static_cast<std::size_t>(r)]);
  }

  // Common scaling c^2 = P / ||W||_F^2 gives every stream the same SNR when
  // the known rows are exact.
  const CMatrix w = pseudo_inverse_columns(known);
  const double c2 = P / w.squaredNorm();
  const CMatrix gains = truth * w;  // (user, stream)
  const double ideal_rate = options.quantization_bits ? 0.0 : zfbf_rate({known}, P) / static_cast<double>(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const std::size_t user = chosen[static_cast<std::size_t>(keep[static_cast<std::size_t>(r)])];
    ScheduledStream s;
    s.user = user;
    s.beam = static_cast<std::size_t>(r);
    s.power = c2 * w.col(r).squaredNorm();
    s.direction = w.col(r).normalized();
    s.reported = known.row(r).adjoint().normalized();
    const double signal = c2 * std::norm(gains(r, r));
    const double interference = c2 * (gains.row(r).squaredNorm() - std::norm(gains(r, r)));
    s.sinr = signal / (1.0 + interference);
    s.rate = options.quantization_bits ? std::log1p(s.sinr) : ideal_rate;
    out.selected.push_back(std::move(s));
  }
  finish(out);
  return out;
}

double algorithm_a_alignment_bound(std::size_t M, std::size_t m, double beta, double eps) {
  if (m < 1 || m > M) throw DomainError("algorithm_a_alignment_bound: need 1 <= m <= M");
  const double md = static_cast<double>(M);
  const double mm = static_cast<double>(m);
  return 1.0 - (3.0 * md - 2.0 * mm - 1.0) * beta - 6.0 * (md - mm) * eps;
}

SchemeOutcome run_algorithm_A(const Snapshot& snap, double P, const AlgorithmAParams& params,
                              Rng& rng) {
  check_snapshot(snap, P, "run_algorithm_A");
  const std::size_t M = snap.dims.M;
  if (snap.dims.K >= M) throw InvalidConfiguration("run_algorithm_A: requires K < M");
  if (!(params.eps > 0.0 && params.eps < 1.0)) throw InvalidConfiguration("run_algorithm_A: eps outside (0, 1)");
  if (!(params.beta > 0.0 && params.beta < 1.0)) throw InvalidConfiguration("run_algorithm_A: beta outside (0, 1)");
  if (params.B < 1 || params.B > kMaxCodebookBits) throw InvalidConfiguration("run_algorithm_A: B outside [1, 24]");
  if (!(params.t >= 0.0)) throw InvalidConfiguration("run_algorithm_A: t must be nonnegative");

  SchemeOutcome out;
  const std::vector<std::size_t> s0 = above_threshold(snap, params.t);
  const Codebook cb = make_codebook(rng, std::size_t{1} << params.B, M);

  std::vector<std::size_t> stage;
  std::vector<CVector> quantized(snap.users.size());
  for (auto k : s0) {
    const QuantizationResult q = quantize_vector(snap.users[k].v_max(), cb);
    quantized[k] = cb.word(q.index);
    if (q.alignment > 1.0 - params.eps) stage.push_back(k);
  }

  std::vector<std::size_t> chosen;
  for (std::size_t m = 1; m <= M; ++m) {
    if (m > 1) {
      const CVector& prev = quantized[chosen.back()];
      std::vector<std::size_t> next;
      for (auto k : stage) {
        if (std::find(chosen.begin(), chosen.end(), k) != chosen.end()) continue;
        if (std::norm(snap.users[k].v_max().dot(prev)) < params.beta) next.push_back(k);
      }
      stage = std::move(next);
    }
    out.candidate_set_sizes.push_back(stage.size());
    for (auto k : stage) out.feedback.send(m, k, MessageKind::kMembership, 1);
    if (stage.empty()) {
      out.fallback_used = true;
      finish(out);
      return out;
    }
    const std::size_t s = pick_one(stage, rng);
    chosen.push_back(s);
    out.feedback.send(m, s, MessageKind::kCodewordIndex, params.B);
  }

  const auto md = static_cast<Eigen::Index>(M);
  CMatrix known(md, md);
  for (Eigen::Index r = 0; r < md; ++r) known.row(r) = quantized[chosen[static_cast<std::size_t>(r)]].adjoint();
  if (!(gram_condition(known) < kGramConditionLimit)) {
    out.fallback_used = true;
    out.zf_reduced = true;
    finish(out);
    return out;
  }
  CMatrix beams = pseudo_inverse_columns(known);
  for (Eigen::Index c = 0; c < md; ++c) beams.col(c).normalize();

  const double rho = P / static_cast<double>(M);
  for (Eigen::Index r = 0; r < md; ++r) {
    const ChannelMatrix& user = snap.users[chosen[static_cast<std::size_t>(r)]];
    // u^H H = sqrt(lambda) v^H, so the combined gains are the eigen row.
    const Eigen::RowVectorXcd gains = user.eigen_row() * beams;
    const RVector a = gains.cwiseAbs2().transpose();
    ScheduledStream s;
    s.user = chosen[static_cast<std::size_t>(r)];
    s.beam = static_cast<std::size_t>(r);
    s.power = rho;
    s.direction = beams.col(r);
    s.reported = quantized[s.user];
    s.sinr = rho * a(r) / (1.0 + rho * (a.sum() - a(r)));
    s.rate = std::log1p(s.sinr);
    out.selected.push_back(std::move(s));
    out.alignment.push_back(std::norm(user.v_max().dot(beams.col(r))));
    out.alignment_bound.push_back(
        algorithm_a_alignment_bound(M, static_cast<std::size_t>(r) + 1, params.beta, params.eps));
  }
  finish(out);
  return out;
}

SchemeOutcome run_algorithm_B(const Snapshot& snap, double P, const AlgorithmBParams& params,
                              Rng& rng) {
  check_snapshot(snap, P, "run_algorithm_B");
  const std::size_t M = snap.dims.M;
  if (snap.dims.K != M) throw InvalidConfiguration("run_algorithm_B: requires K = M");
  if (!(params.eps > 0.0 && params.eps < 1.0)) throw InvalidConfiguration("run_algorithm_B: eps outside (0, 1)");
  if (!(params.t >= 0.0)) throw InvalidConfiguration("run_algorithm_B: t must be nonnegative");

  SchemeOutcome out;
  const std::vector<std::size_t> s0 = above_threshold(snap, params.t);
  const auto md = static_cast<Eigen::Index>(M);
  const CMatrix beams = haar_unitary(rng, md);

  std::vector<std::vector<std::size_t>> sets(M);
  bool any_empty = false;
  for (std::size_t m = 0; m < M; ++m) {
    const CVector phi = beams.col(static_cast<Eigen::Index>(m));
    for (auto k : s0)
      if (std::norm(snap.users[k].v_max().dot(phi)) > 1.0 - params.eps) sets[m].push_back(k);
    out.candidate_set_sizes.push_back(sets[m].size());
    for (auto k : sets[m]) out.feedback.send(m + 1, k, MessageKind::kMembership, 1);
    any_empty = any_empty || sets[m].empty();
  }

  const double rho = P / static_cast<double>(M);
  if (any_empty) {
    out.fallback_used = true;
    std::vector<std::size_t> all(snap.users.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    const std::size_t k = pick_one(all, rng);
    ScheduledStream s;
    s.user = k;
    s.power = P;
    s.rate = tdma_no_csi_rate(snap.users[k], P);
    out.selected.push_back(std::move(s));
    finish(out);
    return out;
  }

  for (std::size_t m = 0; m < M; ++m) {
    const std::size_t k = pick_one(sets[m], rng);
    const CMatrix& h = snap.users[k].entries();
    const CMatrix hb = h * beams;
    const auto mi = static_cast<Eigen::Index>(m);
    CMatrix r = CMatrix::Identity(h.rows(), h.rows());
    for (Eigen::Index j = 0; j < md; ++j)
      if (j != mi) r.noalias() += rho * hb.col(j) * hb.col(j).adjoint();
    const CMatrix with_own = r + rho * hb.col(mi) * hb.col(mi).adjoint();
    ScheduledStream s;
    s.user = k;
    s.beam = m;
    s.power = rho;
    s.direction = beams.col(mi);
    s.rate = logdet_hpd(0.5 * (with_own + with_own.adjoint())) - logdet_hpd(0.5 * (r + r.adjoint()));
    s.sinr = std::expm1(s.rate);
    out.selected.push_back(std::move(s));
  }
  finish(out);
  return out;
}

std::uint64_t low_snr_codebook_bits(double f_target) {
  if (!(f_target > 1.0) || !std::isfinite(f_target)) throw DomainError("low_snr_codebook_bits: f must exceed 1");
  return static_cast<std::uint64_t>(std::ceil(std::sqrt(f_target) / 2.0));
}

double low_snr_threshold(std::size_t N, std::size_t M, std::size_t K, double f_target) {
  if (N < 3) throw DomainError("low_snr_threshold: N must be at least 3");
  if (!(f_target > 1.0)) throw DomainError("low_snr_threshold: f must exceed 1");
  const double ln_n = std::log(static_cast<double>(N));
  const double t = ln_n + static_cast<double>(M + K - 2) * std::log(ln_n) - 0.5 * std::log(f_target);
  return std::max(t, ln_n);
}

SchemeOutcome run_low_snr_rvq(const Snapshot& snap, double P, double f_target, Rng& rng,
                              const Codebook* codebook) {
  check_snapshot(snap, P, "run_low_snr_rvq");
  const std::uint64_t B = low_snr_codebook_bits(f_target);
  if (!codebook && B > kMaxCodebookBits) throw InvalidConfiguration("run_low_snr_rvq: codebook too large");
  const double t = low_snr_threshold(snap.dims.N, snap.dims.M, snap.dims.K, f_target);

  SchemeOutcome out;
  const std::vector<std::size_t> qualified = above_threshold(snap, t);
  out.candidate_set_sizes.push_back(qualified.size());
  for (auto k : qualified) out.feedback.send(0, k, MessageKind::kMembership, 1);
  if (qualified.empty()) {
    out.fallback_used = true;
    finish(out);
    return out;
  }
  const std::size_t k = pick_one(qualified, rng);
  const ChannelMatrix& user = snap.users[k];
  const Codebook own = codebook ? *codebook : make_codebook(rng, std::size_t{1} << B, snap.dims.M);
  const QuantizationResult q = quantize_vector(user.v_max(), own);
  out.feedback.send(1, k, MessageKind::kCodewordIndex, bits_for(own.size()));

  ScheduledStream s;
  s.user = k;
  s.power = P;
  s.direction = own.word(q.index);
  s.reported = s.direction;
  s.sinr = P * user.lambda_max() * q.alignment;
  s.rate = std::log1p(s.sinr);
  out.selected.push_back(std::move(s));
  finish(out);
  return out;
}

double best_single_user_rate(const Snapshot& snap, double P) {
  check_snapshot(snap, P, "best_single_user_rate");
  double best = 0.0;
  for (const auto& u : snap.users) best = std::max(best, std::log1p(P * u.lambda_max()));
  return best;
}

}  // namespace mimofb
