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

#ifndef MIMOFB_CHANNEL_HPP
#define MIMOFB_CHANNEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mimofb/linalg.hpp"
#include "mimofb/rng.hpp"

namespace mimofb {

/// One user's K x M downlink channel with its dominant singular triple.
///
/// lambda_max is the largest eigenvalue of H H^H (the squared largest
/// singular value of H); v_max and u_max are the matching right and left
/// singular vectors, so that H v_max = sqrt(lambda_max) u_max and
/// u_max^H H = sqrt(lambda_max) v_max^H. The first component of v_max with
/// magnitude above 1e-12 is real and nonnegative.
class ChannelMatrix {
 public:
  explicit ChannelMatrix(CMatrix entries);

  const CMatrix& entries() const noexcept { return entries_; }
  Eigen::Index rx_antennas() const noexcept { return entries_.rows(); }
  Eigen::Index tx_antennas() const noexcept { return entries_.cols(); }

  double lambda_max() const noexcept { return lambda_max_; }
  const CVector& v_max() const noexcept { return v_max_; }
  const CVector& u_max() const noexcept { return u_max_; }

  // ||H||_F^2
  double frobenius_sq() const noexcept { return entries_.squaredNorm(); }

  // g = sqrt(lambda_max) v_max^H as a row vector.
  Eigen::RowVectorXcd eigen_row() const;

 private:
  CMatrix entries_;
  double lambda_max_ = 0.0;
  CVector v_max_;
  CVector u_max_;
};

struct Dims {
  std::size_t N = 0;
  std::size_t M = 0;
  std::size_t K = 0;
  bool operator==(const Dims&) const = default;
};

/// One fading realization of all users, reproducible from (seed, dims).
struct Snapshot {
  std::vector<ChannelMatrix> users;
  std::uint64_t seed = 0;
  Dims dims;
};

// Draws a K x M channel with i.i.d. CN(0, 1) entries.
ChannelMatrix sample_channel(Rng& rng, std::size_t K, std::size_t M);

/// Samples N i.i.d. Rayleigh channels. User k is drawn from its own stream
/// derive_seed(seed, {stream::kUsers, k}), so the result does not depend on
/// `workers`. Throws InvalidDimensions unless 1 <= K <= M and N >= 1.
Snapshot sample_snapshot(std::uint64_t seed, std::size_t N, std::size_t M, std::size_t K,
                         int workers = 1);

// Pr{||h||^2 <= t} for a row h of M i.i.d. CN(0,1) entries (Gamma(M, 1)).
double row_norm_sq_cdf(double t, std::size_t M);

// Leading-order tail t^{M+K-2} e^{-t} / (Gamma(M) Gamma(K)) of lambda_max.
// An asymptotic approximation for large t, not an exact complement CDF.
double lambda_max_tail_approx(double t, std::size_t M, std::size_t K);

// Sup-norm distance between the empirical CDF of `samples` and `cdf`.
// Both one-sided limits of every empirical jump are compared; the left
// limit of `cdf` is taken at the next representable double below the jump.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

}  // namespace mimofb

#endif
