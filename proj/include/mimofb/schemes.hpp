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

#ifndef MIMOFB_SCHEMES_HPP
#define MIMOFB_SCHEMES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mimofb/channel.hpp"
#include "mimofb/linalg.hpp"
#include "mimofb/quantize.hpp"
#include "mimofb/rng.hpp"

namespace mimofb {

enum class MessageKind {
  kMembership,     // one-bit "I qualify" flag
  kBeamIndex,      // index of the preferred random beam
  kSinrReport,     // beam index plus quantized SINR value
  kCodewordIndex,  // RVQ codeword index
  kIdealVector,    // unquantized eigenvector, not bit-accounted
  kIdealGain,      // unquantized channel gain, not bit-accounted
};

struct FeedbackMessage {
  std::size_t user = 0;
  MessageKind kind = MessageKind::kMembership;
  std::uint64_t bits = 0;
  bool operator==(const FeedbackMessage&) const = default;
};

struct FeedbackRound {
  std::size_t round = 0;
  std::vector<FeedbackMessage> messages;
  bool operator==(const FeedbackRound&) const = default;
};

/// Uplink feedback of one trial. Messages that stand in for unquantized
/// values carry zero bits and set `idealized`.
class FeedbackTrace {
 public:
  void send(std::size_t round, std::size_t user, MessageKind kind, std::uint64_t bits);

  std::size_t users_signaling() const noexcept { return users_signaling_; }
  std::uint64_t total_bits() const noexcept { return total_bits_; }
  bool idealized() const noexcept { return idealized_; }
  const std::vector<FeedbackRound>& rounds() const noexcept { return rounds_; }

  bool operator==(const FeedbackTrace&) const = default;

 private:
  std::vector<FeedbackRound> rounds_;
  std::vector<std::size_t> signaled_;  // sorted distinct users
  std::size_t users_signaling_ = 0;
  std::uint64_t total_bits_ = 0;
  bool idealized_ = false;
};

/// One scheduled stream: a user (and receive antenna where relevant) on a
/// transmit direction with its power and achieved rate in nats.
struct ScheduledStream {
  std::size_t user = 0;
  std::size_t antenna = 0;
  std::size_t beam = 0;
  double power = 0.0;
  CVector direction;
  // Unit direction the transmitter was told about (the quantized
  // eigenvector for RVQ schemes); empty when not applicable.
  CVector reported;
  double sinr = 0.0;
  double rate = 0.0;
};

struct SchemeOutcome {
  std::vector<ScheduledStream> selected;
  std::vector<double> per_user_rate;
  double sum_rate = 0.0;
  FeedbackTrace feedback;
  bool fallback_used = false;
  // A zero-forcing Gram matrix was ill-conditioned and a row was dropped.
  bool zf_reduced = false;
  // |S_m| per round for the staged schemes.
  std::vector<std::size_t> candidate_set_sizes;
  // Algorithm A: own-beam alignment |v^H Phi|^2 per selected stream and the
  // guaranteed lower bound for that stream.
  std::vector<double> alignment;
  std::vector<double> alignment_bound;
};

// Ceil(log2 M) bits; 0 for M = 1.
std::uint64_t beam_index_bits(std::size_t M);

// Pr{SINR <= x} = 1 - e^{-M x / P} / (1 + x)^{M-1} for one user-antenna
// and one random beam.
double rbf_sinr_cdf(double x, std::size_t M, double P);

// SINR of a receive row on every beam of the orthonormal set `beams`:
// rho a_m / (1 + rho sum_{j != m} a_j) with rho = P / (number of beams).
RVector rbf_sinrs(const Eigen::RowVectorXcd& row, const CMatrix& beams, double P);

struct RbfOptions {
  std::optional<double> threshold;
  std::uint64_t sinr_bits = 16;
};

/// Random beamforming with M Haar beams drawn from `rng`.
///
/// Without a threshold every user-antenna reports its best beam and SINR,
/// and each beam goes to the best reporter on it; a beam nobody prefers is
/// given to the best reporter overall (fallback_used). With threshold t
/// every (user, antenna, beam) triple with SINR > t reports the beam index
/// and each beam picks a reporter uniformly at random; an unclaimed beam
/// carries zero rate and sets fallback_used.
SchemeOutcome run_rbf(const Snapshot& snap, double P, Rng& rng, const RbfOptions& options = {});

/// Threshold t solving e^{-M t / P} / (1 + t)^{M-1} = target / (M N T), so
/// that on average `target_e_users` user-antennas report. Throws
/// InfeasibleTarget when no t >= 0 exists.
double rbf_threshold_solve(std::size_t N, std::size_t M, double P, double target_e_users,
                           double T);

struct ZfbfOptions {
  // Bits per eigenvector report; unset means ideal eigenvector feedback.
  std::optional<std::uint64_t> quantization_bits;
};

/// Eigen-beamforming ZFBF: users with lambda_max > t qualify, min(M, |G|)
/// of them are picked at random and served with equal-SNR zero forcing.
///
/// In the quantized variant each selected user reports an RVQ codeword
/// index from a shared codebook of 2^B words (drawn after the selection)
/// together with an unquantized gain, and rates are evaluated on the true
/// channels.
SchemeOutcome run_threshold_eigen_zfbf(const Snapshot& snap, double P, double t, Rng& rng,
                                       const ZfbfOptions& options = {});

struct AlgorithmAParams {
  double t = 0.0;
  double beta = 0.1;
  double eps = 0.1;
  std::uint64_t B = 8;
};

// Lower bound 1 - (3M - 2m - 1) beta - 6 (M - m) eps on the own-beam
// alignment of the m-th selected user (m is 1-based).
double algorithm_a_alignment_bound(std::size_t M, std::size_t m, double beta, double eps);

/// Staged selection for K < M with RVQ eigenvector feedback and zero
/// forcing on the quantized directions. Any empty stage yields a zero-rate
/// outcome with fallback_used.
SchemeOutcome run_algorithm_A(const Snapshot& snap, double P, const AlgorithmAParams& params,
                              Rng& rng);

struct AlgorithmBParams {
  double t = 0.0;
  double eps = 0.1;
};

/// Staged selection for K = M on M Haar beams with whitened reception.
/// When any stage is empty one random user is served with covariance
/// (P / M) I.
SchemeOutcome run_algorithm_B(const Snapshot& snap, double P, const AlgorithmBParams& params,
                              Rng& rng);

// Codebook size exponent ceil(sqrt(f) / 2) and threshold
// max(ln N + (M + K - 2) ln ln N - ln(f) / 2, ln N) of the low-SNR scheme.
std::uint64_t low_snr_codebook_bits(double f_target);
double low_snr_threshold(std::size_t N, std::size_t M, std::size_t K, double f_target);

/// Low-SNR single-user scheme: one random user with lambda_max above the
/// threshold is served at full power on its RVQ-quantized eigenvector.
/// `codebook` overrides the random codebook.
SchemeOutcome run_low_snr_rvq(const Snapshot& snap, double P, double f_target, Rng& rng,
                              const Codebook* codebook = nullptr);

// max_k ln(1 + P lambda_max(k)): the best single user with full CSI.
double best_single_user_rate(const Snapshot& snap, double P);

}  // namespace mimofb

#endif
