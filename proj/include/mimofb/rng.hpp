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

#ifndef MIMOFB_RNG_HPP
#define MIMOFB_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mimofb {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Bijective on 64-bit words, so distinct counters
// map to distinct keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Key of the child stream `index` below `parent`. Streams are addressed by
// counters, never by draw order, so any subset of trials/users can be
// regenerated independently and in any order.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return splitmix64(parent ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t key = parent;
  for (auto index : path) key = derive_seed(key, index);
  return key;
}

inline Rng make_rng(std::uint64_t key) { return Rng(key); }

// Fixed stream tags. Values are part of the reproducibility contract.
namespace stream {
inline constexpr std::uint64_t kUsers = 1;
inline constexpr std::uint64_t kScheme = 2;
inline constexpr std::uint64_t kCodebook = 3;
inline constexpr std::uint64_t kValidation = 4;
}  // namespace stream

}  // namespace mimofb

#endif
