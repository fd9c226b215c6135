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

#include "mimofb/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mimofb/errors.hpp"
#include "mimofb/parallel.hpp"

namespace mimofb {

ChannelMatrix::ChannelMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1)
    throw InvalidDimensions("ChannelMatrix: empty matrix");
  if (!entries_.allFinite()) throw InvalidInput("ChannelMatrix: non-finite entry");

  if (entries_.rows() == 1) {
    const double norm = entries_.row(0).norm();
    lambda_max_ = norm * norm;
    u_max_ = CVector::Ones(1);
    if (norm > 0.0) {
      v_max_ = entries_.row(0).adjoint() / norm;
    } else {
      v_max_ = CVector::Unit(entries_.cols(), 0);
    }
  } else {
    Eigen::JacobiSVD<CMatrix> svd(entries_, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double s = svd.singularValues()(0);
    lambda_max_ = s * s;
    v_max_ = svd.matrixV().col(0);
    u_max_ = svd.matrixU().col(0);
  }
  // H v = s u is preserved when v and u are rotated by the same phase.
  const cdouble phase = canonical_phase(v_max_);
  u_max_ *= std::conj(phase);
}

Eigen::RowVectorXcd ChannelMatrix::eigen_row() const {
  return std::sqrt(lambda_max_) * v_max_.adjoint();
}

ChannelMatrix sample_channel(Rng& rng, std::size_t K, std::size_t M) {
  return ChannelMatrix(complex_gaussian_matrix(rng, static_cast<Eigen::Index>(K),
                                               static_cast<Eigen::Index>(M)));
}

Snapshot sample_snapshot(std::uint64_t seed, std::size_t N, std::size_t M, std::size_t K,
                         int workers) {
  if (N == 0 || M == 0 || K == 0) throw InvalidDimensions("sample_snapshot: zero dimension");
  if (K > M) throw InvalidDimensions("sample_snapshot: K must not exceed M");

  std::vector<CMatrix> raw(N);
  parallel_for(N, workers, [&](std::size_t k) {
    Rng rng = make_rng(derive_seed(seed, {stream::kUsers, k}));
    raw[k] = complex_gaussian_matrix(rng, static_cast<Eigen::Index>(K),
                                     static_cast<Eigen::Index>(M));
  });

  Snapshot snap;
  snap.seed = seed;
  snap.dims = {N, M, K};
  snap.users.reserve(N);
  for (auto& h : raw) snap.users.emplace_back(std::move(h));
  return snap;
}

double row_norm_sq_cdf(double t, std::size_t M) {
  if (!(t >= 0.0)) throw DomainError("row_norm_sq_cdf: t must be nonnegative");
  if (M == 0) throw DomainError("row_norm_sq_cdf: M must be positive");
  if (std::isinf(t)) return 1.0;
  if (t == 0.0) return 0.0;
  // Lower tail sum_{m >= M} t^m e^{-t} / m! for small t avoids the
  // cancellation in 1 - sum_{m < M}.
  if (t < static_cast<double>(M)) {
    double term = std::exp(static_cast<double>(M) * std::log(t) - t -
                           std::lgamma(static_cast<double>(M) + 1.0));
    double acc = 0.0;
    for (std::size_t m = M; m < M + 2000; ++m) {
      acc += term;
      term *= t / static_cast<double>(m + 1);
      if (term < acc * 1e-17) break;
    }
    return std::clamp(acc, 0.0, 1.0);
  }
  double term = std::exp(-t);
  double upper = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    upper += term;
    term *= t / static_cast<double>(m + 1);
  }
  return std::clamp(1.0 - upper, 0.0, 1.0);
}

double lambda_max_tail_approx(double t, std::size_t M, std::size_t K) {
  if (!(t > 0.0)) throw DomainError("lambda_max_tail_approx: t must be positive");
  if (M == 0 || K == 0) throw DomainError("lambda_max_tail_approx: M and K must be positive");
  const double order = static_cast<double>(M + K) - 2.0;
  const double log_value = order * std::log(t) - t - std::lgamma(static_cast<double>(M)) -
                           std::lgamma(static_cast<double>(K));
  return std::exp(log_value);
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw EmptyInput("ks_distance: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double x = sorted[i];
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == x) ++j;
    const double below = static_cast<double>(i) / n;
    const double at = static_cast<double>(j) / n;
    const double f_at = cdf(x);
    const double f_left = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    worst = std::max({worst, std::abs(at - f_at), std::abs(f_left - below)});
    i = j;
  }
  return std::min(worst, 1.0);
}

}  // namespace mimofb
