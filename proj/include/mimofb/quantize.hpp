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

#ifndef MIMOFB_QUANTIZE_HPP
#define MIMOFB_QUANTIZE_HPP

#include <cstddef>
#include <cstdint>

#include "mimofb/linalg.hpp"
#include "mimofb/rng.hpp"

namespace mimofb {

/// Random vector quantization codebook: L unit-norm words in C^M, stored as
/// the columns of an M x L matrix.
class Codebook {
 public:
  Codebook(CMatrix words, std::uint64_t seed);

  const CMatrix& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(words_.cols()); }
  Eigen::Index dim() const noexcept { return words_.rows(); }
  CVector word(std::size_t l) const { return words_.col(static_cast<Eigen::Index>(l)); }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  CMatrix words_;
  std::uint64_t seed_ = 0;
};

struct QuantizationResult {
  std::size_t index = 0;
  double alignment = 0.0;  // |v^H c|^2
  double residual = 1.0;   // 1 - alignment
};

// L words uniform on the unit sphere of C^M, drawn from stream
// derive_seed(seed, stream::kCodebook).
Codebook make_codebook(std::uint64_t seed, std::size_t L, std::size_t M);
Codebook make_codebook(Rng& rng, std::size_t L, std::size_t M);

// Best-aligned word; ties go to the smallest index. `v` must have unit
// norm within 1e-8.
QuantizationResult quantize_vector(const CVector& v, const Codebook& cb);

// Pr{|v^H c|^2 <= theta} for one random word: 1 - (1 - theta)^{M-1}.
double theta_word_cdf(double theta, std::size_t M);

// Pr{max over L words <= theta} = [1 - (1 - theta)^{M-1}]^L.
double theta_cdf(double theta, std::size_t M, std::size_t L);

// Exact E{theta} = 1 - B(1/(M-1), L+1) / (M-1).
double expected_theta(std::size_t M, std::size_t L);

// 1 - L^{-1/(M-1)} (1 + e^{-1}/(M-1)).
double expected_theta_lower_bound(std::size_t M, std::size_t L);

/// [max(0, 1 - L_i C(M-1, i-1) theta^{M-i})]^N: lower bound on the
/// probability that the residual interference projection of the i-th
/// encoded user exceeds theta, for any quantizer with L_i words.
double epsilon_error_prob_lower_bound(double theta, double L_i, std::size_t M, std::size_t i,
                                      std::size_t N);

/// Density (M-1)! / (pi^{M-i} (i-1)!) (1 - ||y||^2)^{i-1} of the projection
/// of an isotropic unit vector of C^M onto M - i coordinates; `y` must have
/// M - i entries and norm at most 1.
double projection_density(const CVector& y, std::size_t M, std::size_t i);

// M ln(1 + P gamma ln(N) 2^{-B/(M-1)}); N >= 3.
double zf_quantization_gap_bound(double B, double P, double N, std::size_t M, double gamma);

// Default gamma (M-1)/M for the bound above.
inline double default_gap_gamma(std::size_t M) {
  return static_cast<double>(M - 1) / static_cast<double>(M);
}

/// One draw of min_n ||(c_n + dv_n)^H U||^2 over N users, where each user
/// quantizes an isotropic eigenvector v_n = c_n + dv_n with a private
/// codebook of L words and U is a random M x (M - i) orthonormal basis.
double simulate_epsilon_residual(Rng& rng, std::size_t M, std::size_t i, std::size_t N,
                                 std::size_t L);

}  // namespace mimofb

#endif
