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


// Shared helpers for the unit tests: seeded case generators for the
// hand-rolled property tests and a few independent reference routines.

#ifndef MIMOFB_TESTS_SUPPORT_HPP
#define MIMOFB_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "mimofb/channel.hpp"
#include "mimofb/linalg.hpp"
#include "mimofb/rng.hpp"

namespace mimofb::testing {

// Runs `body(rng, case_index)` on `cases` independently seeded cases. The
// case index is reported by doctest through CAPTURE at the call site.
template <class Body>
void for_cases(std::uint64_t seed, std::size_t cases, Body&& body) {
  for (std::size_t c = 0; c < cases; ++c) {
    Rng rng = make_rng(derive_seed(seed, c));
    body(rng, c);
  }
}

inline std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random (K, M) with 1 <= K <= M <= max_m.
inline std::pair<std::size_t, std::size_t> random_shape(Rng& rng, std::size_t max_m) {
  const std::size_t M = uniform_size(rng, 1, max_m);
  return {uniform_size(rng, 1, M), M};
}

// Snapshot built from explicit channel matrices.
inline Snapshot snapshot_of(std::vector<CMatrix> channels, std::uint64_t seed = 0) {
  Snapshot s;
  s.seed = seed;
  s.dims.N = channels.size();
  s.dims.K = static_cast<std::size_t>(channels.front().rows());
  s.dims.M = static_cast<std::size_t>(channels.front().cols());
  for (auto& h : channels) s.users.emplace_back(std::move(h));
  return s;
}

inline double mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double stderr_of(const std::vector<double>& x) {
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

// Composite Simpson rule on [a, b] with an even number of panels.
template <class F>
double simpson(F&& f, double a, double b, int panels = 2000) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace mimofb::testing

#endif
