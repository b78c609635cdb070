// Copyright 2026 The Gamepot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAMEPOT_RNG_HPP_
#define GAMEPOT_RNG_HPP_

#include <cstdint>
#include <random>
#include <string>

namespace gamepot {

// Draw mappings are hand-rolled (not std::uniform_*_distribution) so that a
// seed reproduces the same stream on any platform.

/// splitmix64 — used to derive independent per-session seeds from one seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) with 53 bits of entropy.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n).
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

/// Uniform double in [lo, hi).
inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// 32 lowercase hex chars (128 random bits) — session identifiers.
inline std::string random_hex32(std::mt19937_64& rng) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (int word = 0; word < 2; ++word) {
    std::uint64_t v = rng();
    for (int i = 15; i >= 0; --i) {
      out.push_back(digits[(v >> (4 * i)) & 0xf]);
    }
  }
  return out;
}

}  // namespace gamepot

#endif  // GAMEPOT_RNG_HPP_
