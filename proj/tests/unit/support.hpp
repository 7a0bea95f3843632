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

// Helpers shared by the unit tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lrmc/linalg.hpp"
#include "lrmc/pattern.hpp"
#include "lrmc/random.hpp"
#include "lrmc/solvers.hpp"

namespace lrmc::testing {

inline Matrix random_low_rank(int n1, int n2, int r, std::uint64_t seed) {
  auto rng = make_rng(seed, 77);
  const Matrix v = gaussian_matrix(n1, r, rng);
  const Matrix w = gaussian_matrix(n2, r, rng);
  return v * w.transpose();
}

inline ObservationPattern bernoulli_pattern(int n1, int n2, double p, std::uint64_t seed) {
  auto rng = make_rng(seed, 78);
  std::bernoulli_distribution keep(p);
  std::vector<Index> e;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (keep(rng)) e.push_back({i, j});
  if (e.empty()) e.push_back({0, 0});
  return ObservationPattern(n1, n2, std::move(e));
}

inline ObservationPattern off_diagonal(int n) {
  std::vector<Index> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) e.push_back({i, j});
  return ObservationPattern(n, n, std::move(e));
}

// {(i, j) : i >= j} minus (n, 1), 0-based.
inline ObservationPattern staircase(int n) {
  std::vector<Index> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (!(i == n - 1 && j == 0)) e.push_back({i, j});
  return ObservationPattern(n, n, std::move(e));
}

// Two diagonal blocks: rows [0, a1) x cols [0, b1) and the remainder.
inline ObservationPattern two_blocks(int n1, int n2, int a1, int b1) {
  std::vector<Index> e;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if ((i < a1) == (j < b1)) e.push_back({i, j});
  return ObservationPattern(n1, n2, std::move(e));
}

// Observed block structure of the tightness construction: the first r rows
// and the first r columns are observed, the trailing block is missing.
inline ObservationPattern cross_pattern(int n1, int n2, int r) {
  std::vector<Index> e;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (i < r || j < r) e.push_back({i, j});
  return ObservationPattern(n1, n2, std::move(e));
}

inline double rel_error(const Matrix& a, const Matrix& b) {
  return (a - b).frobenius_norm() / b.frobenius_norm();
}

}  // namespace lrmc::testing
