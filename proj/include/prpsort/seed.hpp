// Copyright 2026 The prp-sort Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic, platform-independent hashing and seed derivation. Standard
// library distributions are implementation-defined, so anything that feeds a
// golden file goes through these helpers instead.

#ifndef PRPSORT_SEED_HPP_
#define PRPSORT_SEED_HPP_

#include <cstdint>
#include <string_view>

namespace prpsort {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view s,
                              std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  return splitmix64(seed ^ splitmix64(salt));
}

/// Maps a 64-bit value onto [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Draws an index in [0, bound) from a 64-bit engine. Modulo reduction keeps
/// the result identical across standard libraries; the bias is < 2^-50 for
/// the list sizes handled here.
template <typename Engine>
std::uint64_t draw_index(Engine& engine, std::uint64_t bound) {
  return static_cast<std::uint64_t>(engine()) % bound;
}

}  // namespace prpsort

#endif  // PRPSORT_SEED_HPP_
