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

#ifndef MIMOFB_ASYMPTOTICS_HPP
#define MIMOFB_ASYMPTOTICS_HPP

#include <cstddef>
#include <string>

namespace mimofb {

// Leading-order scaling laws. Every slack term of order o(1), O(.) or
// omega(1) is dropped, so these are comparison curves and trend oracles,
// never pointwise predictions.

enum class Regime { kFixedSnr, kLowSnr, kHighSnr };

std::string to_string(Regime r);

struct ScalingPrediction {
  std::string label;
  double value = 0.0;
  Regime regime = Regime::kFixedSnr;
  double N = 0.0;
  double P = 0.0;
};

// M ln(1 + (P/M) ln N). Requires N >= 3 and M >= 2.
double ropt_asymptote(std::size_t M, double P, double N);

// P ln N, the low-SNR proxy for P E{max eigenvalue}. Throws RegimeError
// unless P ln N < 0.1.
double low_snr_ropt_proxy(double P, double N);

// Random-beamforming threshold at high SNR with c = ln P / ln N:
// (P/M)(ln N - ln(P)/2) when c < 1 and (P/(2M)) ln N otherwise.
double rbf_highsnr_threshold(double P, double N, std::size_t M);

/// Feedback bits needed to keep the full multiplexing gain at high SNR.
/// K < M: ln ln(P ln N) + sum_{i=1}^{M-K} max(0, (M-i) ln(P ln N) - ln N).
/// K = M: max(0, ln ln ln N). Throws DomainError when P ln N <= 1.
double feedback_bits_lower_bound(std::size_t M, std::size_t K, double P, double N);

struct EmptyProbability {
  double exact = 0.0;        // (1 - q)^N
  double exponential = 0.0;  // e^{-N q}
};

EmptyProbability predicted_empty_prob(double N, double q);

// ln N + (K-1) ln ln N - ln ln ln N - ln(Gamma(M) Gamma(K)).
double algorithm_b_threshold(std::size_t M, std::size_t K, double N);

// Per-user stage probability Pr{lambda_max > t} eps^{M-1} using the
// leading-order eigenvalue tail.
double algorithm_b_q(std::size_t M, std::size_t K, double t, double eps);

ScalingPrediction predict_ropt(std::size_t M, double P, double N);

}  // namespace mimofb

#endif
