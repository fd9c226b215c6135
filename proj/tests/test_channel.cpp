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


#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mimofb/channel.hpp"
#include "mimofb/errors.hpp"
#include "support.hpp"

using namespace mimofb;
using mimofb::testing::for_cases;

namespace {

// Lower incomplete gamma for integer shape s: (s-1)! (1 - e^{-t} sum_{k<s} t^k/k!).
double lower_gamma_int(int s, double t) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < s; ++k) {
    term *= t / k;
    sum += term;
  }
  return std::tgamma(s) * (1.0 - std::exp(-t) * sum);
}

// Exact Pr{lambda_max > t} for a 2 x 2 complex Gaussian matrix, from the
// determinant form of the largest-eigenvalue distribution of a complex
// Wishart matrix.
double exact_tail_2x2(double t) {
  const double g1 = lower_gamma_int(1, t);
  const double g2 = lower_gamma_int(2, t);
  const double g3 = lower_gamma_int(3, t);
  return 1.0 - (g1 * g3 - g2 * g2);
}

}  // namespace

TEST_CASE("channel entries have unit average power") {
  // 10^5 resamples of a 1 x 2 channel.
  double acc = 0.0;
  std::size_t count = 0;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    const Snapshot snap = sample_snapshot(s, 1, 2, 1);
    for (Eigen::Index j = 0; j < 2; ++j) acc += std::norm(snap.users[0].entries()(0, j));
    count += 2;
  }
  CHECK(acc / static_cast<double>(count) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("mean squared Frobenius norm is M K") {
  const Snapshot snap = sample_snapshot(99, 100000, 2, 2);
  double acc = 0.0;
  for (const auto& u : snap.users) acc += u.frobenius_sq();
  // Gamma(4, 1) has sd 2, so the standard error is about 0.006.
  CHECK(acc / 100000.0 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("snapshots are reproducible and independent of the worker count") {
  const Snapshot a = sample_snapshot(5, 37, 3, 2, 1);
  const Snapshot b = sample_snapshot(5, 37, 3, 2, 1);
  const Snapshot c = sample_snapshot(5, 37, 3, 2, 4);
  const Snapshot d = sample_snapshot(6, 37, 3, 2, 1);
  REQUIRE(a.users.size() == 37);
  CHECK(a.dims == Dims{37, 3, 2});
  bool differs = false;
  for (std::size_t k = 0; k < a.users.size(); ++k) {
    CHECK(a.users[k].entries() == b.users[k].entries());
    CHECK(a.users[k].entries() == c.users[k].entries());
    differs = differs || a.users[k].entries() != d.users[k].entries();
  }
  CHECK(differs);
}

TEST_CASE("a user's channel does not depend on N") {
  const Snapshot small = sample_snapshot(17, 4, 2, 1);
  const Snapshot large = sample_snapshot(17, 64, 2, 1);
  for (std::size_t k = 0; k < small.users.size(); ++k)
    CHECK(small.users[k].entries() == large.users[k].entries());
}

TEST_CASE("eigen decomposition invariants on random shapes") {
  for_cases(1234, 300, [](Rng& rng, std::size_t c) {
    CAPTURE(c);
    const auto [K, M] = testing::random_shape(rng, 4);
    const ChannelMatrix h = sample_channel(rng, K, M);
    const CMatrix& H = h.entries();
    CHECK(h.rx_antennas() == static_cast<Eigen::Index>(K));
    CHECK(h.tx_antennas() == static_cast<Eigen::Index>(M));

    // Reference: largest eigenvalue of H H^H from a Hermitian solver.
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(H * H.adjoint());
    const double ref = eig.eigenvalues().maxCoeff();
    CHECK(h.lambda_max() == doctest::Approx(ref).epsilon(1e-9));

    CHECK(std::abs(h.v_max().norm() - 1.0) <= 1e-10);
    CHECK(std::abs(h.u_max().norm() - 1.0) <= 1e-10);
    const double s = std::sqrt(h.lambda_max());
    CHECK((H * h.v_max() - s * h.u_max()).norm() <= 1e-9 * std::max(1.0, s));
    CHECK((h.u_max().adjoint() * H - s * h.v_max().adjoint()).norm() <= 1e-9 * std::max(1.0, s));
    CHECK((h.eigen_row() - s * h.v_max().adjoint()).norm() <= 1e-12 * std::max(1.0, s));

    // lambda_max lies between the average and the total eigenvalue mass.
    const double fro = h.frobenius_sq();
    CHECK(h.lambda_max() <= fro * (1.0 + 1e-12));
    CHECK(h.lambda_max() >= fro / static_cast<double>(K) * (1.0 - 1e-12));

    // Phase convention: first non-negligible entry of v_max is real positive.
    const CVector& v = h.v_max();
    Eigen::Index first = 0;
    while (first < v.size() && std::abs(v(first)) <= 1e-12) ++first;
    REQUIRE(first < v.size());
    CHECK(v(first).real() > 0.0);
    CHECK(std::abs(v(first).imag()) <= 1e-12);
  });
}

TEST_CASE("identity channel has unit eigenvalue") {
  const ChannelMatrix h(CMatrix::Identity(2, 2));
  CHECK(h.lambda_max() == doctest::Approx(1.0));
  CHECK(h.frobenius_sq() == doctest::Approx(2.0));
}

TEST_CASE("channel construction rejects bad input") {
  CHECK_THROWS_AS(ChannelMatrix(CMatrix(0, 2)), InvalidDimensions);
  CMatrix bad = CMatrix::Ones(1, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ChannelMatrix{bad}, InvalidInput);
  CHECK_THROWS_AS(sample_snapshot(1, 4, 2, 3), InvalidDimensions);
  CHECK_THROWS_AS(sample_snapshot(1, 0, 2, 1), InvalidDimensions);
  CHECK_THROWS_AS(sample_snapshot(1, 4, 0, 0), InvalidDimensions);
}

TEST_CASE("row norm CDF") {
  CHECK(row_norm_sq_cdf(0.0, 2) == 0.0);
  CHECK(row_norm_sq_cdf(std::numeric_limits<double>::infinity(), 2) == doctest::Approx(1.0));
  // Gamma(2, 1) at 2: 1 - 3 e^{-2}.
  CHECK(row_norm_sq_cdf(2.0, 2) == doctest::Approx(0.5939941502901619).epsilon(1e-15));
  CHECK(row_norm_sq_cdf(2.0, 2) == doctest::Approx(1.0 - 3.0 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(row_norm_sq_cdf(1.5, 1) == doctest::Approx(1.0 - std::exp(-1.5)).epsilon(1e-15));
  CHECK_THROWS_AS(row_norm_sq_cdf(-1.0, 2), DomainError);
  CHECK_THROWS_AS(row_norm_sq_cdf(1.0, 0), DomainError);

  // Both evaluation branches agree with direct quadrature of the Gamma(M, 1)
  // density, which stays accurate where the complement form cancels.
  for (std::size_t M : {1u, 2u, 3u, 5u, 8u}) {
    for (double t : {0.01, 0.3, 1.0, 2.5, 4.0, 7.9, 8.1, 15.0, 40.0}) {
      CAPTURE(M);
      CAPTURE(t);
      const double norm = std::tgamma(static_cast<double>(M));
      const double ref = testing::simpson(
          [&](double x) { return std::pow(x, static_cast<double>(M) - 1.0) * std::exp(-x) / norm; }, 0.0, t, 20000);
      CHECK(row_norm_sq_cdf(t, M) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("row norm CDF is monotone and bounded") {
  for_cases(77, 200, [](Rng& rng, std::size_t c) {
    CAPTURE(c);
    const std::size_t M = testing::uniform_size(rng, 1, 8);
    const double a = testing::uniform_real(rng, 0.0, 30.0);
    const double b = a + testing::uniform_real(rng, 0.0, 5.0);
    const double fa = row_norm_sq_cdf(a, M);
    const double fb = row_norm_sq_cdf(b, M);
    CHECK(fa >= 0.0);
    CHECK(fb <= 1.0);
    CHECK(fa <= fb);
  });
}

TEST_CASE("eigenvalue tail approximation") {
  CHECK(lambda_max_tail_approx(10.0, 2, 2) == doctest::Approx(0.004539992976248485).epsilon(1e-14));
  // M = K = 1: exactly e^{-t}.
  CHECK(lambda_max_tail_approx(3.0, 1, 1) == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));
  // Leading order of the exact 2 x 2 tail.
  const double exact = exact_tail_2x2(10.0);
  CHECK(exact == doctest::Approx(0.004630790774619833).epsilon(1e-9));
  CHECK(lambda_max_tail_approx(10.0, 2, 2) / exact == doctest::Approx(1.0).epsilon(0.03));
  CHECK(lambda_max_tail_approx(25.0, 2, 2) / exact_tail_2x2(25.0) == doctest::Approx(1.0).epsilon(0.005));
  CHECK_THROWS_AS(lambda_max_tail_approx(0.0, 2, 2), DomainError);
  CHECK_THROWS_AS(lambda_max_tail_approx(1.0, 0, 2), DomainError);
}

TEST_CASE("exact 2x2 tail agrees with simulation") {
  Rng rng = make_rng(4242);
  const std::size_t n = 200000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += sample_channel(rng, 2, 2).lambda_max() > 6.0;
  const double p = exact_tail_2x2(6.0);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  CHECK(std::abs(static_cast<double>(hits) / static_cast<double>(n) - p) < 4.0 * se);
}

TEST_CASE("KS distance") {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  SUBCASE("single sample at the median") {
    const std::vector<double> one{0.5};
    CHECK(ks_distance(one, uniform) == doctest::Approx(0.5));
  }
  SUBCASE("evenly spaced sample") {
    std::vector<double> xs;
    for (int i = 0; i < 100; ++i) xs.push_back((i + 0.5) / 100.0);
    CHECK(ks_distance(xs, uniform) == doctest::Approx(0.005));
  }
  SUBCASE("point mass at a CDF jump") {
    // CDF of the constant 1: step at 1. The left limit is 0 and the sample
    // CDF jumps from 0 to 1 there too, so the distance is zero.
    const auto step = [](double x) { return x >= 1.0 ? 1.0 : 0.0; };
    const std::vector<double> ones(10, 1.0);
    CHECK(ks_distance(ones, step) == doctest::Approx(0.0));
  }
  SUBCASE("uniform draws") {
    Rng rng = make_rng(8);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = testing::uniform_real(rng, 0.0, 1.0);
    CHECK(ks_distance(xs, uniform) < 0.01);
  }
  SUBCASE("property: result in [0, 1] and order independent") {
    for_cases(3, 50, [&](Rng& rng, std::size_t c) {
      CAPTURE(c);
      std::vector<double> xs(testing::uniform_size(rng, 1, 40));
      for (auto& x : xs) x = testing::uniform_real(rng, -0.5, 1.5);
      const double d = ks_distance(xs, uniform);
      CHECK(d >= 0.0);
      CHECK(d <= 1.0);
      std::reverse(xs.begin(), xs.end());
      CHECK(ks_distance(xs, uniform) == d);
    });
  }
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}, uniform), EmptyInput);
}
