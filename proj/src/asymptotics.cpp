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

#include "mimofb/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "mimofb/channel.hpp"
#include "mimofb/errors.hpp"

namespace mimofb {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::kFixedSnr: return "fixed-SNR";
    case Regime::kLowSnr: return "low-SNR";
    case Regime::kHighSnr: return "high-SNR";
  }
  return "unknown";
}

double ropt_asymptote(std::size_t M, double P, double N) {
  if (M < 2) throw DomainError("ropt_asymptote: M must be at least 2");
  if (!(N >= 3.0)) throw DomainError("ropt_asymptote: N must be at least 3");
  if (!(P >= 0.0)) throw DomainError("ropt_asymptote: P must be nonnegative");
  const double m = static_cast<double>(M);
  return m * std::log1p(P / m * std::log(N));
}

double low_snr_ropt_proxy(double P, double N) {
  if (!(P >= 0.0)) throw DomainError("low_snr_ropt_proxy: P must be nonnegative");
  if (!(N >= 1.0)) throw DomainError("low_snr_ropt_proxy: N must be at least 1");
  const double value = P * std::log(N);
  if (!(value < 0.1)) throw RegimeError("low_snr_ropt_proxy: P ln N must be below 0.1");
  return value;
}

double rbf_highsnr_threshold(double P, double N, std::size_t M) {
  if (!(P >= 1.0)) throw DomainError("rbf_highsnr_threshold: P must be at least 1");
  if (!(N >= 3.0)) throw DomainError("rbf_highsnr_threshold: N must be at least 3");
  if (M == 0) throw DomainError("rbf_highsnr_threshold: M must be positive");
  const double m = static_cast<double>(M);
  const double ln_n = std::log(N);
  const double c = std::log(P) / ln_n;
  if (c < 1.0) return P / m * (ln_n - 0.5 * std::log(P));
  return P / (2.0 * m) * ln_n;
}

double feedback_bits_lower_bound(std::size_t M, std::size_t K, double P, double N) {
  if (K == 0 || K > M) throw DomainError("feedback_bits_lower_bound: need 1 <= K <= M");
  if (!(N >= 3.0)) throw DomainError("feedback_bits_lower_bound: N must be at least 3");
  if (!(P > 0.0)) throw DomainError("feedback_bits_lower_bound: P must be positive");
  const double ln_n = std::log(N);
  if (K == M) return std::max(0.0, std::log(std::log(ln_n)));
  const double snr_log = P * ln_n;
  if (!(snr_log > 1.0)) throw DomainError("feedback_bits_lower_bound: P ln N must exceed 1");
  const double l = std::log(snr_log);
  double total = std::log(l);
  for (std::size_t i = 1; i <= M - K; ++i)
    total += std::max(0.0, static_cast<double>(M - i) * l - ln_n);
  return total;
}

EmptyProbability predicted_empty_prob(double N, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("predicted_empty_prob: q outside [0, 1]");
  if (!(N >= 0.0)) throw DomainError("predicted_empty_prob: N must be nonnegative");
  EmptyProbability out;
  out.exact = q == 1.0 ? (N == 0.0 ? 1.0 : 0.0) : std::exp(N * std::log1p(-q));
  out.exponential = std::exp(-N * q);
  return out;
}

double algorithm_b_threshold(std::size_t M, std::size_t K, double N) {
  if (M == 0 || K == 0) throw DomainError("algorithm_b_threshold: M and K must be positive");
  const double ln_n = std::log(N);
  if (!(std::log(ln_n) > 0.0)) throw DomainError("algorithm_b_threshold: N must exceed e");
  return ln_n + static_cast<double>(K - 1) * std::log(ln_n) - std::log(std::log(ln_n)) -
         std::lgamma(static_cast<double>(M)) - std::lgamma(static_cast<double>(K));
}

double algorithm_b_q(std::size_t M, std::size_t K, double t, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("algorithm_b_q: eps outside (0, 1)");
  const double tail = std::min(1.0, lambda_max_tail_approx(t, M, K));
  return tail * std::pow(eps, static_cast<double>(M - 1));
}

ScalingPrediction predict_ropt(std::size_t M, double P, double N) {
  return {"ropt_asymptote (leading order)", ropt_asymptote(M, P, N), Regime::kFixedSnr, N, P};
}

}  // namespace mimofb
