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

#include <cstddef>
#include <vector>

namespace lrmc {

/// A matrix position, 0-based.
struct Index {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Index&, const Index&) = default;
};

/// The set of observed positions on an n1 x n2 grid. Entries are kept sorted
/// (row-major order) together with a dense membership mask, so the complement
/// is always derived from the same data.
class ObservationPattern {
 public:
  ObservationPattern() = default;
  /// Throws InvalidArgument for n1 < 2, n2 < 2, out-of-range or duplicate
  /// entries, or an empty set.
  ObservationPattern(int n1, int n2, std::vector<Index> entries);

  static ObservationPattern full(int n1, int n2);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  /// Number of observed positions.
  std::size_t m() const { return entries_.size(); }
  std::size_t complement_size() const {
    return static_cast<std::size_t>(n1_) * static_cast<std::size_t>(n2_) - entries_.size();
  }

  const std::vector<Index>& entries() const { return entries_; }
  /// Unobserved positions in row-major order.
  std::vector<Index> complement() const;

  bool contains(int i, int j) const { return mask_[static_cast<std::size_t>(i) * n2_ + j] != 0; }
  /// Position of (i, j) in entries(), or -1 when unobserved.
  int position(int i, int j) const { return slot_[static_cast<std::size_t>(i) * n2_ + j]; }

  /// Same grid with rows and columns relabelled: entry (i, j) maps to
  /// (row_perm[i], col_perm[j]).
  ObservationPattern permuted(const std::vector<int>& row_perm,
                              const std::vector<int>& col_perm) const;
  bool is_subset_of(const ObservationPattern& other) const;

  friend bool operator==(const ObservationPattern& a, const ObservationPattern& b) {
    return a.n1_ == b.n1_ && a.n2_ == b.n2_ && a.entries_ == b.entries_;
  }

 private:
  int n1_ = 0;
  int n2_ = 0;
  std::vector<Index> entries_;
  std::vector<char> mask_;
  std::vector<int> slot_;
};

struct RowColCounts {
  std::vector<int> rows;
  std::vector<int> cols;
};

RowColCounts row_col_counts(const ObservationPattern& p);

/// True iff every row and every column holds at least r observations
/// (necessary for well-posedness at rank r).
bool min_count_check(const ObservationPattern& p, int r);

struct ReducibilityReport {
  bool reducible = false;
  /// Connected components of the graph on observed entries, where two entries
  /// are adjacent when they share a row or a column. Each is sorted.
  std::vector<std::vector<Index>> components;
  /// For each component, the rows/columns it touches.
  std::vector<std::vector<int>> row_groups;
  std::vector<std::vector<int>> col_groups;
  /// Rows/columns with no observation at all. Reported separately: they are
  /// not components, and make every completion non-unique.
  std::vector<int> empty_rows;
  std::vector<int> empty_cols;
};

/// Breadth-first search over row/column buckets; O(m + n1 + n2).
ReducibilityReport is_reducible(const ObservationPattern& p);

/// The generic rank bound R(n1, n2, m) = (n1+n2)/2 - sqrt((n1+n2)^2/4 - m),
/// the real root of r(n1 + n2 - r) = m.
struct GenericBounds {
  int n1 = 0;
  int n2 = 0;
  long long m = 0;
  double value = 0.0;
  /// Smallest integer r with r(n1+n2-r) >= m; equals ceil(value) and is
  /// computed in exact integer arithmetic.
  int ceil = 0;

  /// Dimension of the rank-r manifold: r(n1 + n2 - r).
  long long manifold_dim(int r) const;
  /// Expected characteristic rank: r(n1 + n2 - r) + n1 n2 - m.
  long long f_rm(int r) const;
};

GenericBounds generic_bound(int n1, int n2, long long m);
GenericBounds generic_bound(const ObservationPattern& p);

/// The bound with m replaced by its expectation n1 n2 p under Bernoulli(p)
/// sampling.
double estimated_bound(int n1, int n2, double sampling_prob);

/// Generic rank bound for the factor analysis analogue on a p x p covariance
/// matrix: (2p + 1 - sqrt(8p + 1)) / 2.
double mrfa_bound(int p_dim);

}  // namespace lrmc
