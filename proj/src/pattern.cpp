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

#include "lrmc/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "lrmc/error.hpp"

namespace lrmc {

ObservationPattern::ObservationPattern(int n1, int n2, std::vector<Index> entries)
    : n1_(n1), n2_(n2), entries_(std::move(entries)) {
  if (n1 < 2 || n2 < 2)
    throw InvalidArgument("pattern: dimensions must be at least 2x2, got " + std::to_string(n1) +
                          "x" + std::to_string(n2));
  if (entries_.empty()) throw InvalidArgument("pattern: no observed entries");
  std::sort(entries_.begin(), entries_.end());
  const std::size_t cells = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
  mask_.assign(cells, 0);
  slot_.assign(cells, -1);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto [i, j] = entries_[k];
    if (i < 0 || i >= n1 || j < 0 || j >= n2)
      throw InvalidArgument("pattern: entry (" + std::to_string(i + 1) + ", " +
                            std::to_string(j + 1) + ") outside " + std::to_string(n1) + "x" +
                            std::to_string(n2));
    const std::size_t cell = static_cast<std::size_t>(i) * n2 + j;
    if (mask_[cell])
      throw InvalidArgument("pattern: duplicate entry (" + std::to_string(i + 1) + ", " +
                            std::to_string(j + 1) + ")");
    mask_[cell] = 1;
    slot_[cell] = static_cast<int>(k);
  }
}

ObservationPattern ObservationPattern::full(int n1, int n2) {
  std::vector<Index> e;
  e.reserve(static_cast<std::size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) e.push_back({i, j});
  return {n1, n2, std::move(e)};
}

std::vector<Index> ObservationPattern::complement() const {
  std::vector<Index> out;
  out.reserve(complement_size());
  for (int i = 0; i < n1_; ++i)
    for (int j = 0; j < n2_; ++j)
      if (!contains(i, j)) out.push_back({i, j});
  return out;
}

ObservationPattern ObservationPattern::permuted(const std::vector<int>& row_perm,
                                                const std::vector<int>& col_perm) const {
  if (row_perm.size() != static_cast<std::size_t>(n1_) ||
      col_perm.size() != static_cast<std::size_t>(n2_))
    throw InvalidArgument("pattern: permutation size mismatch");
  std::vector<Index> e;
  e.reserve(entries_.size());
  for (const auto& [i, j] : entries_) e.push_back({row_perm[i], col_perm[j]});
  return {n1_, n2_, std::move(e)};
}

bool ObservationPattern::is_subset_of(const ObservationPattern& other) const {
  if (n1_ != other.n1_ || n2_ != other.n2_) return false;
  return std::all_of(entries_.begin(), entries_.end(),
                     [&](const Index& e) { return other.contains(e.row, e.col); });
}

RowColCounts row_col_counts(const ObservationPattern& p) {
  RowColCounts c{std::vector<int>(p.n1(), 0), std::vector<int>(p.n2(), 0)};
  for (const auto& [i, j] : p.entries()) {
    ++c.rows[i];
    ++c.cols[j];
  }
  return c;
}

bool min_count_check(const ObservationPattern& p, int r) {
  if (r < 1 || r > std::min(p.n1(), p.n2()))
    throw InvalidArgument("min_count_check: rank " + std::to_string(r) + " out of range");
  const auto c = row_col_counts(p);
  auto ok = [r](int x) { return x >= r; };
  return std::all_of(c.rows.begin(), c.rows.end(), ok) &&
         std::all_of(c.cols.begin(), c.cols.end(), ok);
}

ReducibilityReport is_reducible(const ObservationPattern& p) {
  const auto& entries = p.entries();
  const std::size_t m = entries.size();
  std::vector<std::vector<int>> by_row(p.n1());
  std::vector<std::vector<int>> by_col(p.n2());
  for (std::size_t k = 0; k < m; ++k) {
    by_row[entries[k].row].push_back(static_cast<int>(k));
    by_col[entries[k].col].push_back(static_cast<int>(k));
  }

  ReducibilityReport rep;
  for (int i = 0; i < p.n1(); ++i)
    if (by_row[i].empty()) rep.empty_rows.push_back(i);
  for (int j = 0; j < p.n2(); ++j)
    if (by_col[j].empty()) rep.empty_cols.push_back(j);

  // Each row/column bucket is expanded once, which keeps the search linear
  // even though the entry graph itself can have quadratically many edges.
  std::vector<int> component(m, -1);
  std::vector<char> row_done(p.n1(), 0);
  std::vector<char> col_done(p.n2(), 0);
  std::deque<int> queue;
  int count = 0;
  for (std::size_t start = 0; start < m; ++start) {
    if (component[start] >= 0) continue;
    std::vector<Index> members;
    std::vector<int> rows;
    std::vector<int> cols;
    component[start] = count;
    queue.push_back(static_cast<int>(start));
    while (!queue.empty()) {
      const int k = queue.front();
      queue.pop_front();
      members.push_back(entries[k]);
      const auto [i, j] = entries[k];
      if (!row_done[i]) {
        row_done[i] = 1;
        rows.push_back(i);
        for (int nb : by_row[i])
          if (component[nb] < 0) {
            component[nb] = count;
            queue.push_back(nb);
          }
      }
      if (!col_done[j]) {
        col_done[j] = 1;
        cols.push_back(j);
        for (int nb : by_col[j])
          if (component[nb] < 0) {
            component[nb] = count;
            queue.push_back(nb);
          }
      }
    }
    std::sort(members.begin(), members.end());
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    rep.components.push_back(std::move(members));
    rep.row_groups.push_back(std::move(rows));
    rep.col_groups.push_back(std::move(cols));
    ++count;
  }
  rep.reducible = count > 1;
  return rep;
}

long long GenericBounds::manifold_dim(int r) const {
  return static_cast<long long>(r) * (n1 + n2 - r);
}

long long GenericBounds::f_rm(int r) const {
  return manifold_dim(r) + static_cast<long long>(n1) * n2 - m;
}

GenericBounds generic_bound(int n1, int n2, long long m) {
  if (n1 < 1 || n2 < 1 || m < 0 || m > static_cast<long long>(n1) * n2)
    throw InvalidArgument("generic_bound: invalid dimensions or cardinality");
  GenericBounds b;
  b.n1 = n1;
  b.n2 = n2;
  b.m = m;
  const double half = 0.5 * (n1 + n2);
  // Discriminant (n1+n2)^2/4 - m = ((n1-n2)^2 + 4(n1 n2 - m)) / 4, evaluated
  // from integers so that m = n1 n2 collapses to |n1-n2|/2 exactly.
  const long long diff = static_cast<long long>(n1) - n2;
  const long long disc4 = diff * diff + 4 * (static_cast<long long>(n1) * n2 - m);
  b.value = half - 0.5 * std::sqrt(static_cast<double>(disc4));
  int r = 0;
  while (b.manifold_dim(r) < m) ++r;
  b.ceil = r;
  return b;
}

GenericBounds generic_bound(const ObservationPattern& p) {
  return generic_bound(p.n1(), p.n2(), static_cast<long long>(p.m()));
}

double estimated_bound(int n1, int n2, double sampling_prob) {
  if (!(sampling_prob > 0.0 && sampling_prob <= 1.0))
    throw InvalidArgument("estimated_bound: sampling probability must lie in (0, 1]");
  const double half = 0.5 * (n1 + n2);
  const double disc = half * half - static_cast<double>(n1) * n2 * sampling_prob;
  return half - std::sqrt(std::max(0.0, disc));
}

double mrfa_bound(int p_dim) {
  if (p_dim < 1) throw InvalidArgument("mrfa_bound: dimension must be positive");
  return (2.0 * p_dim + 1.0 - std::sqrt(8.0 * p_dim + 1.0)) / 2.0;
}

}  // namespace lrmc
