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
#include <numeric>
#include <vector>

#include "mimofb/capacity.hpp"
#include "mimofb/channel.hpp"
#include "mimofb/errors.hpp"
#include "support.hpp"

using namespace mimofb;
using mimofb::testing::for_cases;
using mimofb::testing::snapshot_of;

namespace {

// Brute-force sum capacity of two single-antenna users: grid over the
// power split p1 + p2 = P in steps of P / steps.
double two_user_grid(const ChannelMatrix& a, const ChannelMatrix& b, double P, int steps) {
  const CVector ha = a.entries().row(0).adjoint();
  const CVector hb = b.entries().row(0).adjoint();
  const Eigen::Index m = ha.size();
  double best = -1.0;
  for (int s = 0; s <= steps; ++s) {
    const double p1 = P * s / steps;
    const CMatrix S = CMatrix::Identity(m, m) + p1 * ha * ha.adjoint() + (P - p1) * hb * hb.adjoint();
    best = std::max(best, std::log(S.determinant().real()));
  }
  return best;
}

// Frank-Wolfe gap of a feasible dual-MAC point, computed from scratch.
double independent_gap(std::span<const ChannelMatrix> users, const CovarianceSet& q, double P) {
  const Eigen::Index m = users.front().tx_antennas();
  CMatrix S = CMatrix::Identity(m, m);
  for (std::size_t i = 0; i < users.size(); ++i)
    S += users[i].entries().adjoint() * q.matrices[i] * users[i].entries();
  const CMatrix Sinv = S.inverse();
  double top = 0.0;
  double linear = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const CMatrix& H = users[i].entries();
    const CMatrix G = H * Sinv * H.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (G + G.adjoint()));
    top = std::max(top, eig.eigenvalues().maxCoeff());
    linear += (q.matrices[i] * G).trace().real();
  }
  return P * top - linear;
}

CovarianceSet uniform_point(std::size_t n, Eigen::Index k, double P) {
  CovarianceSet q;
  q.total_power = P;
  q.matrices.assign(n, P / static_cast<double>(n * static_cast<std::size_t>(k)) * CMatrix::Identity(k, k));
  return q;
}

}  // namespace

TEST_CASE("single user, single antenna: full power") {
  Rng rng = make_rng(1);
  const std::vector<ChannelMatrix> users{sample_channel(rng, 1, 3)};
  const double P = 7.0;
  const double expect = std::log1p(P * users[0].frobenius_sq());
  CHECK(dual_mac_sum_capacity(users, P).value == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("two single-antenna users match the grid oracle") {
  for_cases(2024, 10, [](Rng& rng, std::size_t c) {
    CAPTURE(c);
    const std::vector<ChannelMatrix> users{sample_channel(rng, 1, 2), sample_channel(rng, 1, 2)};
    const double solver = dual_mac_sum_capacity(users, 10.0).value;
    const double grid = two_user_grid(users[0], users[1], 10.0, 10000);
    CHECK(solver >= grid - 1e-9);
    CHECK(std::abs(solver - grid) < 1e-3);
  });
}

TEST_CASE("dual-MAC solution: feasibility, certificate and ascent") {
  for_cases(99, 40, [](Rng& rng, std::size_t c) {
    CAPTURE(c);
    const auto [K, M] = testing::random_shape(rng, 3);
    const std::size_t N = testing::uniform_size(rng, 1, 40);
    const double P = std::pow(10.0, testing::uniform_real(rng, -1.0, 2.5));
    CAPTURE(K);
    CAPTURE(M);
    CAPTURE(N);
    CAPTURE(P);
    std::vector<ChannelMatrix> users;
    for (std::size_t i = 0; i < N; ++i) users.push_back(sample_channel(rng, K, M));

    const DualMacResult r = dual_mac_sum_capacity(users, P);
    REQUIRE(r.argmax.matrices.size() == N);
    CHECK(r.argmax.trace_sum() <= P * (1.0 + 1e-9));
    for (const auto& q : r.argmax.matrices) {
      CHECK((q - q.adjoint()).norm() <= 1e-12 * std::max(1.0, q.norm()));
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(q);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * P);
    }
    CHECK(dual_mac_objective(users, r.argmax) == doctest::Approx(r.value).epsilon(1e-12));

    // Independent optimality certificate: the Frank-Wolfe gap bounds the
    // distance to the optimum.
    const double gap = independent_gap(users, r.argmax, P);
    CHECK(gap <= 1e-7 * std::max(1.0, r.value));

    // Uniform power is feasible, so the optimum is at least its value.
    CHECK(r.value >= dual_mac_objective(users, uniform_point(N, static_cast<Eigen::Index>(K), P)) - 1e-12);

    // Monotone ascent across iterations.
    REQUIRE(!r.history.empty());
    CHECK(r.history.front() == doctest::Approx(dual_mac_objective(users, uniform_point(N, static_cast<Eigen::Index>(K), P))));
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1]);
    CHECK(r.history.back() == r.value);
  });
}

TEST_CASE("dual-MAC capacity is nondecreasing in P") {
  for_cases(5, 10, [](Rng& rng, std::size_t c) {
    CAPTURE(c);
    std::vector<ChannelMatrix> users;
    for (int i = 0; i < 12; ++i) users.push_back(sample_channel(rng, 2, 2));
    double prev = 0.0;
    for (double P : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 1000.0}) {
      const double v = dual_mac_sum_capacity(users, P).value;
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
  });
}

TEST_CASE("dual-MAC errors") {
  Rng rng = make_rng(3);
  const std::vector<ChannelMatrix> users{sample_channel(rng, 1, 2), sample_channel(rng, 1, 2)};
  CHECK_THROWS_AS(dual_mac_sum_capacity(std::vector<ChannelMatrix>{}, 1.0), InvalidInput);
  CHECK_THROWS_AS(dual_mac_sum_capacity(users, 0.0), DomainError);
  CHECK_THROWS_AS(dual_mac_sum_capacity(users, 1.0, {0.0, 10}), DomainError);
  const std::vector<ChannelMatrix> mixed{sample_channel(rng, 1, 2), sample_channel(rng, 2, 2)};
  CHECK_THROWS_AS(dual_mac_sum_capacity(mixed, 1.0), InvalidInput);
}

TEST_CASE("non-convergence carries the last iterate") {
  Rng rng = make_rng(11);
  std::vector<ChannelMatrix> users;
  for (int i = 0; i < 16; ++i) users.push_back(sample_channel(rng, 2, 2));
  bool thrown = false;
  try {
    dual_mac_sum_capacity(users, 100.0, {1e-15, 0});
  } catch (const ConvergenceError& e) {
    thrown = true;
    const DualMacResult& last = e.last_iterate();
    CHECK(last.argmax.matrices.size() == users.size());
    CHECK(last.history.size() == 1);
    CHECK(last.duality_gap > 0.0);
    CHECK(last.value == doctest::Approx(dual_mac_objective(users, last.argmax)));
  }
  CHECK(thrown);
}

TEST_CASE("DPC rate") {
  Rng rng = make_rng(21);
  const std::vector<ChannelMatrix> users{sample_channel(rng, 1, 2), sample_channel(rng, 1, 2)};
  const std::vector<std::size_t> order{0, 1};
  const std::vector<std::size_t> reversed{1, 0};

  SUBCASE("all-zero covariances") {
    CovarianceSet q{{CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)}, 1.0};
    CHECK(dpc_sum_rate(users, q, order) == doctest::Approx(0.0));
  }
  SUBCASE("single user, rank one") {
    const std::vector<ChannelMatrix> one{users[0]};
    const CVector phi = random_unit_vector(rng, 2);
    const double P = 3.0;
    CovarianceSet q{{P * phi * phi.adjoint()}, P};
    const std::vector<std::size_t> o{0};
    const double expect = std::log1p(P * (users[0].entries() * phi).squaredNorm());
    CHECK(dpc_sum_rate(one, q, o) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("rank-one covariances never beat the dual MAC") {
    for_cases(31, 50, [&](Rng& r, std::size_t c) {
      CAPTURE(c);
      const double P = 10.0;
      const double split = testing::uniform_real(r, 0.0, 1.0);
      const CVector a = random_unit_vector(r, 2);
      const CVector b = random_unit_vector(r, 2);
      CovarianceSet q{{split * P * a * a.adjoint(), (1.0 - split) * P * b * b.adjoint()}, P};
      const double cap = dual_mac_sum_capacity(users, P).value;
      const double r1 = dpc_sum_rate(users, q, order);
      const double r2 = dpc_sum_rate(users, q, reversed);
      CHECK(r1 >= 0.0);
      CHECK(r2 >= 0.0);
      CHECK(r1 <= cap + 1e-6);
      CHECK(r2 <= cap + 1e-6);
    });
  }
  SUBCASE("uplink-optimal powers on matched beams stay below the dual MAC") {
    for_cases(41, 20, [](Rng& r, std::size_t c) {
      CAPTURE(c);
      std::vector<ChannelMatrix> group;
      for (int i = 0; i < 4; ++i) group.push_back(sample_channel(r, 1, 2));
      const double P = 10.0;
      const DualMacResult opt = dual_mac_sum_capacity(group, P);
      CovarianceSet bc;
      bc.total_power = P;
      for (std::size_t i = 0; i < group.size(); ++i) {
        const CVector phi = group[i].entries().row(0).adjoint().normalized();
        bc.matrices.push_back(opt.argmax.matrices[i].trace().real() * phi * phi.adjoint());
      }
      std::vector<std::size_t> perm{0, 1, 2, 3};
      do {
        CHECK(dpc_sum_rate(group, bc, perm) <= opt.value + 1e-6);
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
  }
  SUBCASE("errors") {
    CovarianceSet q{{CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)}, 1.0};
    const std::vector<std::size_t> bad{0, 0};
    CHECK_THROWS_AS(dpc_sum_rate(users, q, bad), InvalidInput);
    const std::vector<std::size_t> short_order{0};
    CHECK_THROWS_AS(dpc_sum_rate(users, q, short_order), InvalidInput);
    CovarianceSet wrong{{CMatrix::Zero(3, 3), CMatrix::Zero(2, 2)}, 1.0};
    CHECK_THROWS_AS(dpc_sum_rate(users, wrong, order), InvalidInput);
  }
}

TEST_CASE("ZFBF rate") {
  SUBCASE("scaled orthonormal rows") {
    Rng rng = make_rng(2);
    const CMatrix U = haar_unitary(rng, 3);
    const double c = 2.5;
    const double P = 6.0;
    const EffectiveChannel h{std::sqrt(c) * U.adjoint()};
    CHECK(zfbf_rate(h, P) == doctest::Approx(3.0 * std::log1p(P * c / 3.0)).epsilon(1e-12));
  }
  SUBCASE("single row") {
    Rng rng = make_rng(4);
    const CMatrix g = complex_gaussian_matrix(rng, 1, 3);
    CHECK(zfbf_rate({g}, 2.0) == doctest::Approx(std::log1p(2.0 * g.squaredNorm())).epsilon(1e-12));
  }
  SUBCASE("matches explicit pseudo-inverse beams") {
    for_cases(12, 50, [](Rng& rng, std::size_t c) {
      CAPTURE(c);
      const CMatrix G = complex_gaussian_matrix(rng, 2, 2);
      const double P = 10.0;
      // Beams W = G^{-1}; equal per-stream SNR s with sum power P:
      // s * sum_j ||w_j||^2 = P.
      const CMatrix W = G.inverse();
      double norms = 0.0;
      for (Eigen::Index j = 0; j < 2; ++j) norms += W.col(j).squaredNorm();
      const double snr = P / norms;
      const CMatrix gains = G * W * std::sqrt(snr);
      double expect = 0.0;
      for (Eigen::Index j = 0; j < 2; ++j) expect += std::log1p(std::norm(gains(j, j)));
      CHECK(zfbf_rate({G}, P) == doctest::Approx(expect).epsilon(1e-9));
    });
  }
  SUBCASE("singular Gram matrix") {
    CMatrix g(2, 2);
    g << 1.0, 2.0, 2.0, 4.0;
    CHECK(gram_condition(g) >= kGramConditionLimit);
    CHECK_THROWS_AS(zfbf_rate({g}, 1.0), SingularityError);
  }
  SUBCASE("from_users stacks eigen rows") {
    const Snapshot snap = sample_snapshot(3, 5, 3, 2);
    const std::vector<std::size_t> sel{4, 1};
    const EffectiveChannel h = EffectiveChannel::from_users(snap.users, sel);
    REQUIRE(h.rows.rows() == 2);
    for (Eigen::Index r = 0; r < 2; ++r)
      CHECK(h.rows.row(r).squaredNorm() ==
            doctest::Approx(snap.users[sel[static_cast<std::size_t>(r)]].lambda_max()).epsilon(1e-9));
  }
}

TEST_CASE("TDMA without CSI") {
  CHECK(tdma_no_csi_rate(ChannelMatrix(CMatrix::Zero(2, 2)), 5.0) == doctest::Approx(0.0));
  CHECK(tdma_no_csi_rate(ChannelMatrix(CMatrix::Identity(2, 2)), 5.0) ==
        doctest::Approx(2.0 * std::log1p(2.5)).epsilon(1e-12));
  Rng rng = make_rng(9);
  const ChannelMatrix h = sample_channel(rng, 1, 3);
  CHECK(tdma_no_csi_rate(h, 6.0) == doctest::Approx(std::log1p(2.0 * h.frobenius_sq())).epsilon(1e-12));
}

TEST_CASE("covariance structure diagnostics") {
  SUBCASE("rank-one input") {
    Rng rng = make_rng(6);
    const std::vector<ChannelMatrix> users{sample_channel(rng, 2, 2), sample_channel(rng, 2, 2)};
    const CVector phi = random_unit_vector(rng, 2);
    CovarianceSet q{{4.0 * phi * phi.adjoint(), CMatrix::Zero(2, 2)}, 4.0};
    const CovarianceDiagnostics d = covariance_structure_diagnostics(q, users, 4.0);
    REQUIRE(d.active_users.size() == 1);
    CHECK(d.active_users[0] == 0);
    CHECK(d.dominant_fraction[0] == doctest::Approx(1.0));
    CHECK(d.power_share[0] == doctest::Approx(1.0));
    CHECK(d.pairwise_inner.empty());
  }
  SUBCASE("optimal covariances at N=512 are rank one") {
    // Calibration over 20 seeds (M = K = 2, P = 10): every positive-power
    // user had dominant fraction 1.0000; 3-4 users were active in 19 of 20
    // seeds and the single two-user seed had |phi1^H phi2|^2 = 0.016.
    std::size_t users_total = 0;
    std::size_t users_ok = 0;
    std::size_t two_active = 0;
    std::size_t two_active_ok = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Snapshot snap = sample_snapshot(1000 + s, 512, 2, 2);
      const DualMacResult r = dual_mac_sum_capacity(snap.users, 10.0);
      const CovarianceDiagnostics d = covariance_structure_diagnostics(r.argmax, snap.users, 10.0);
      CHECK(std::accumulate(d.power_share.begin(), d.power_share.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-6));
      for (double f : d.dominant_fraction) {
        ++users_total;
        users_ok += f >= 0.95;
      }
      if (d.active_users.size() == 2) {
        ++two_active;
        two_active_ok += d.pairwise_inner[0] * d.pairwise_inner[0] <= 0.2;
      }
    }
    CHECK(static_cast<double>(users_ok) >= 0.9 * static_cast<double>(users_total));
    CHECK(static_cast<double>(two_active_ok) >= 0.9 * static_cast<double>(two_active));
  }
}
