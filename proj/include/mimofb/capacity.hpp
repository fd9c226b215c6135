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

#ifndef MIMOFB_CAPACITY_HPP
#define MIMOFB_CAPACITY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "mimofb/channel.hpp"
#include "mimofb/errors.hpp"
#include "mimofb/linalg.hpp"

namespace mimofb {

/// Per-user PSD covariances under a common sum-power budget. Dual-MAC
/// covariances are K x K; broadcast-side covariances are M x M.
struct CovarianceSet {
  std::vector<CMatrix> matrices;
  double total_power = 0.0;

  double trace_sum() const;
};

/// Rows g_i = sqrt(lambda_max) v_max^H of the scheduled users (m x M).
struct EffectiveChannel {
  CMatrix rows;

  static EffectiveChannel from_users(std::span<const ChannelMatrix> users,
                                     std::span<const std::size_t> selected);
};

struct DualMacOptions {
  double tol = 1e-8;
  std::size_t max_iters = 10000;
};

struct DualMacResult {
  double value = 0.0;  // nats
  CovarianceSet argmax;
  std::size_t iterations = 0;
  double duality_gap = 0.0;
  // Objective after every iteration, starting with the uniform point.
  std::vector<double> history;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, DualMacResult last)
      : Error(what), last_(std::move(last)) {}
  const DualMacResult& last_iterate() const noexcept { return last_; }

 private:
  DualMacResult last_;
};

// ln|I + sum_i H_i^H Q_i H_i| for dual-MAC covariances Q_i (K x K).
double dual_mac_objective(std::span<const ChannelMatrix> users, const CovarianceSet& q);

/// Sum capacity of the broadcast channel via its dual MAC:
/// max ln|I + sum_i H_i^H Q_i H_i| subject to sum_i Tr(Q_i) <= P.
///
/// Ascent from the uniform point Q_i = P/(N K) I. Each iteration forms three
/// candidate directions: the joint sum-power waterfilling solution against
/// the interference of all other users, the linearized (Frank-Wolfe)
/// vertex, and a Newton step restricted to the face spanned by the current
/// supports. It moves along the one with the largest exact line-search
/// gain, so the objective never decreases. Stops once the Frank-Wolfe duality gap,
/// an upper bound on the distance to the optimum, is at most
/// tol * max(1, value). Throws ConvergenceError after max_iters.
DualMacResult dual_mac_sum_capacity(std::span<const ChannelMatrix> users, double P,
                                    const DualMacOptions& options = {});

/// Successive-encoding rate for broadcast covariances Q_i (M x M) and the
/// encoding order `order` (a permutation of 0..n-1): sum over positions of
/// ln|I + H Q H^H (I + H (sum_{later} Q) H^H)^{-1}|.
double dpc_sum_rate(std::span<const ChannelMatrix> users, const CovarianceSet& q,
                    std::span<const std::size_t> order);

/// m ln(1 + P / Tr[(G G^H)^{-1}]) for the m x M effective channel G: the
/// equal-SNR zero-forcing rate. Throws SingularityError when the Gram
/// matrix has condition number >= 1e8.
double zfbf_rate(const EffectiveChannel& h_eff, double P);

// Condition number (max/min eigenvalue) of G G^H; infinite when singular.
double gram_condition(const CMatrix& rows);

inline constexpr double kGramConditionLimit = 1e8;

// ln|I + (P/M) H H^H|: time sharing with isotropic transmission.
double tdma_no_csi_rate(const ChannelMatrix& h, double P);

struct CovarianceDiagnostics {
  std::vector<std::size_t> active_users;   // Tr(Q_i) > 1e-6 P
  std::vector<double> dominant_fraction;   // lambda_1(Q_i) / Tr(Q_i)
  std::vector<double> power_share;         // Tr(Q_i) / P
  // |phi_i^H phi_j| over active pairs (i < j), phi_i = H_i^H u_i normalized
  // with u_i the dominant eigenvector of Q_i.
  std::vector<double> pairwise_inner;
};

CovarianceDiagnostics covariance_structure_diagnostics(const CovarianceSet& argmax,
                                                       std::span<const ChannelMatrix> users,
                                                       double P);

}  // namespace mimofb

#endif
