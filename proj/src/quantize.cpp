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

#include "mimofb/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "mimofb/errors.hpp"

namespace mimofb {

Codebook::Codebook(CMatrix words, std::uint64_t seed) : words_(std::move(words)), seed_(seed) {
  if (words_.rows() < 1 || words_.cols() < 1) throw InvalidInput("Codebook: empty codebook");
  for (Eigen::Index l = 0; l < words_.cols(); ++l) {
    if (std::abs(words_.col(l).norm() - 1.0) > 1e-10) throw InvalidInput("Codebook: word is not unit norm");
  }
}

Codebook make_codebook(Rng& rng, std::size_t L, std::size_t M) {
  if (L == 0 || M == 0) throw InvalidInput("make_codebook: L and M must be positive");
  const auto dim = static_cast<Eigen::Index>(M);
  CMatrix words(dim, static_cast<Eigen::Index>(L));
  for (Eigen::Index l = 0; l < words.cols(); ++l) words.col(l) = random_unit_vector(rng, dim);
  return Codebook(std::move(words), 0);
}

Codebook make_codebook(std::uint64_t seed, std::size_t L, std::size_t M) {
  Rng rng = make_rng(derive_seed(seed, stream::kCodebook));
  Codebook cb = make_codebook(rng, L, M);
  return Codebook(cb.words(), seed);
}

QuantizationResult quantize_vector(const CVector& v, const Codebook& cb) {
  if (v.size() != cb.dim()) throw InvalidInput("quantize_vector: dimension mismatch");
  if (std::abs(v.norm() - 1.0) > 1e-8) throw InvalidInput("quantize_vector: input is not unit norm");
  const CVector proj = cb.words().adjoint() * v;
  QuantizationResult out;
  double best = -1.0;
  for (Eigen::Index l = 0; l < proj.size(); ++l) {
    const double a = std::norm(proj(l));
    if (a > best) {
      best = a;
      out.index = static_cast<std::size_t>(l);
    }
  }
  out.alignment = std::clamp(best, 0.0, 1.0);
  out.residual = 1.0 - out.alignment;
  return out;
}

double theta_word_cdf(double theta, std::size_t M) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("theta_word_cdf: theta outside [0, 1]");
  if (M < 2) throw DomainError("theta_word_cdf: M must be at least 2");
  return 1.0 - std::pow(1.0 - theta, static_cast<double>(M - 1));
}

double theta_cdf(double theta, std::size_t M, std::size_t L) {
  if (L == 0) throw DomainError("theta_cdf: L must be positive");
  return std::pow(theta_word_cdf(theta, M), static_cast<double>(L));
}

double expected_theta(std::size_t M, std::size_t L) {
  if (M < 2) throw DomainError("expected_theta: M must be at least 2");
  if (L == 0) throw DomainError("expected_theta: L must be positive");
  const double a = 1.0 / static_cast<double>(M - 1);
  const double b = static_cast<double>(L) + 1.0;
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return 1.0 - a * std::exp(log_beta);
}

double expected_theta_lower_bound(std::size_t M, std::size_t L) {
  if (M < 2) throw DomainError("expected_theta_lower_bound: M must be at least 2");
  if (L == 0) throw DomainError("expected_theta_lower_bound: L must be positive");
  const double m1 = static_cast<double>(M - 1);
  return 1.0 - std::pow(static_cast<double>(L), -1.0 / m1) * (1.0 + std::exp(-1.0) / m1);
}

double epsilon_error_prob_lower_bound(double theta, double L_i, std::size_t M, std::size_t i,
                                      std::size_t N) {
  if (i < 1 || i >= M) throw DomainError("epsilon_error_prob_lower_bound: need 1 <= i <= M-1");
  if (!(theta > 0.0)) throw DomainError("epsilon_error_prob_lower_bound: theta must be positive");
  if (!(L_i >= 1.0)) throw DomainError("epsilon_error_prob_lower_bound: L_i must be at least 1");
  // C(M-1, i-1) via lgamma to stay finite for large M.
  const double log_binom = std::lgamma(static_cast<double>(M)) - std::lgamma(static_cast<double>(i)) -
                           std::lgamma(static_cast<double>(M - i + 1));
  const double inner = 1.0 - L_i * std::exp(log_binom + static_cast<double>(M - i) * std::log(theta));
  const double base = std::max(0.0, inner);
  return std::clamp(std::pow(base, static_cast<double>(N)), 0.0, 1.0);
}

double projection_density(const CVector& y, std::size_t M, std::size_t i) {
  if (i < 1 || i >= M) throw DomainError("projection_density: need 1 <= i <= M-1");
  if (y.size() != static_cast<Eigen::Index>(M - i))
    throw InvalidInput("projection_density: y must have M - i entries");
  const double r2 = y.squaredNorm();
  if (r2 > 1.0) throw DomainError("projection_density: ||y|| exceeds 1");
  const double log_norm = std::lgamma(static_cast<double>(M)) - std::lgamma(static_cast<double>(i)) -
                          static_cast<double>(M - i) * std::log(std::numbers::pi);
  return std::exp(log_norm) * std::pow(1.0 - r2, static_cast<double>(i - 1));
}

double zf_quantization_gap_bound(double B, double P, double N, std::size_t M, double gamma) {
  if (!(N >= 3.0)) throw DomainError("zf_quantization_gap_bound: N must be at least 3");
  if (M < 2) throw DomainError("zf_quantization_gap_bound: M must be at least 2");
  if (!(B >= 0.0)) throw DomainError("zf_quantization_gap_bound: B must be nonnegative");
  if (!(gamma > 0.0)) throw DomainError("zf_quantization_gap_bound: gamma must be positive");
  if (!(P >= 0.0)) throw DomainError("zf_quantization_gap_bound: P must be nonnegative");
  if (std::isinf(B)) return 0.0;
  const double inner = P * gamma * std::log(N) * std::exp2(-B / static_cast<double>(M - 1));
  return static_cast<double>(M) * std::log1p(inner);
}

double simulate_epsilon_residual(Rng& rng, std::size_t M, std::size_t i, std::size_t N,
                                 std::size_t L) {
  if (i < 1 || i >= M) throw DomainError("simulate_epsilon_residual: need 1 <= i <= M-1");
  if (N == 0 || L == 0) throw InvalidInput("simulate_epsilon_residual: N and L must be positive");
  const auto dim = static_cast<Eigen::Index>(M);
  const CMatrix basis = haar_unitary(rng, dim).leftCols(static_cast<Eigen::Index>(M - i));
  double best = 2.0;
  for (std::size_t n = 0; n < N; ++n) {
    const CVector v = random_unit_vector(rng, dim);
    const Codebook cb = make_codebook(rng, L, M);
    const CVector v_hat = cb.word(quantize_vector(v, cb).index);
    const CVector dv = v - v_hat;
    const double eps = ((v_hat + dv).adjoint() * basis).squaredNorm();
    best = std::min(best, eps);
  }
  return best;
}

}  // namespace mimofb
