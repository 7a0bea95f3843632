// Copyright 2026 The lrmc Authors
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

#pragma once

#include <cstdint>
#include <random>

#include "lrmc/linalg.hpp"

namespace lrmc {

/// Generator for substream `stream` of `seed`. Distinct (seed, stream) pairs
/// give independent-looking sequences; the same pair always gives the same one.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x6c726d63u};
  return std::mt19937_64(seq);
}

/// Matrix of independent standard normal entries, filled row by row.
inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = dist(rng);
  return m;
}

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                              std::uint64_t stream) {
  auto rng = make_rng(seed, stream);
  return gaussian_matrix(rows, cols, rng);
}

}  // namespace lrmc
