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

// Exact completion: rank-one propagation and Schur-complement filling.

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "lrmc/error.hpp"
#include "lrmc/solvers.hpp"

namespace lrmc {
namespace {

constexpr double kConsistencyTol = 1e-9;
constexpr double kMaxCondition = 1e12;

std::string pos(int i, int j) {
  return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

// Dense view of the entries currently known, observed or filled.
struct Known {
  Matrix y;
  std::vector<char> mask;
  int n2 = 0;
  bool has(int i, int j) const { return mask[static_cast<std::size_t>(i) * n2 + j] != 0; }
};

Known from_observed(const ObservedMatrix& m) {
  Known k{m.zero_filled(), std::vector<char>(static_cast<std::size_t>(m.n1()) * m.n2(), 0),
          m.n2()};
  for (const auto& [i, j] : m.pattern().entries()) k.mask[static_cast<std::size_t>(i) * m.n2() + j] = 1;
  return k;
}

// Returns false when the core block is too ill-conditioned.
bool schur_value(const Known& kn, int k, int l, std::span<const int> rows,
                 std::span<const int> cols, double& out) {
  const std::size_t r = rows.size();
  Matrix a(r, r);
  for (std::size_t p = 0; p < r; ++p)
    for (std::size_t q = 0; q < r; ++q) a(p, q) = kn.y(rows[p], cols[q]);
  const SvdResult s = svd(a);
  const double smax = s.singular_values.front();
  const double smin = s.singular_values.back();
  if (smax == 0.0 || smin * kMaxCondition < smax) return false;
  // x = A^{-1} M[I1, l], then M[k, I2] x.
  std::vector<double> x(r, 0.0);
  for (std::size_t c = 0; c < r; ++c) {
    double t = 0.0;
    for (std::size_t p = 0; p < r; ++p) t += s.u(p, c) * kn.y(rows[p], l);
    t /= s.singular_values[c];
    for (std::size_t q = 0; q < r; ++q) x[q] += s.vt(c, q) * t;
  }
  out = 0.0;
  for (std::size_t q = 0; q < r; ++q) out += kn.y(k, cols[q]) * x[q];
  return true;
}

bool block_known(const Known& kn, std::span<const int> rows, std::span<const int> cols) {
  for (int i : rows)
    for (int j : cols)
      if (!kn.has(i, j)) return false;
  return true;
}

// Visits r-subsets of `pool` in lexicographic order until `f` returns true.
template <class F>
bool for_each_subset(const std::vector<int>& pool, int r, F&& f) {
  const int n = static_cast<int>(pool.size());
  if (r > n) return false;
  std::vector<int> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> pick(r);
  while (true) {
    for (int t = 0; t < r; ++t) pick[t] = pool[idx[t]];
    if (f(pick)) return true;
    int t = r - 1;
    while (t >= 0 && idx[t] == n - r + t) --t;
    if (t < 0) return false;
    ++idx[t];
    for (int u = t + 1; u < r; ++u) idx[u] = idx[u - 1] + 1;
  }
}

bool fill_exhaustive(const Known& kn, int k, int l, int r, const std::vector<int>& rows_pool,
                     const std::vector<int>& cols_pool, int budget, double& out) {
  int tried = 0;
  return for_each_subset(rows_pool, r, [&](const std::vector<int>& i1) {
    return for_each_subset(cols_pool, r, [&](const std::vector<int>& i2) {
      if (++tried > budget) return true;
      return block_known(kn, i1, i2) && schur_value(kn, k, l, i1, i2, out);
    });
  }) && tried <= budget;
}

// Pivoted growth of (I1, I2): each step adds the candidate pair whose Schur
// complement pivot, relative to the bordered block, is largest in magnitude.
bool fill_greedy(const Known& kn, int k, int l, int r, const std::vector<int>& rows_pool,
                 const std::vector<int>& cols_pool, int budget, double& out) {
  std::vector<std::pair<int, int>> starts;
  for (int i : rows_pool)
    for (int j : cols_pool)
      if (kn.has(i, j) && kn.y(i, j) != 0.0) starts.emplace_back(i, j);
  std::stable_sort(starts.begin(), starts.end(), [&](auto a, auto b) {
    return std::abs(kn.y(a.first, a.second)) > std::abs(kn.y(b.first, b.second));
  });
  int tried = 0;
  for (const auto& [i0, j0] : starts) {
    std::vector<int> i1{i0};
    std::vector<int> i2{j0};
    bool stuck = false;
    while (static_cast<int>(i1.size()) < r && !stuck) {
      double best = 0.0;
      int bi = -1;
      int bj = -1;
      for (int i : rows_pool) {
        if (std::find(i1.begin(), i1.end(), i) != i1.end()) continue;
        for (int j : cols_pool) {
          if (std::find(i2.begin(), i2.end(), j) != i2.end()) continue;
          if (++tried > budget) return false;
          bool ok = kn.has(i, j);
          for (int q : i2) ok = ok && kn.has(i, q);
          for (int p : i1) ok = ok && kn.has(p, j);
          if (!ok) continue;
          // Pivot = M_ij - M[i, I2] M[I1, I2]^{-1} M[I1, j].
          double proj = 0.0;
          if (!schur_value(kn, i, j, i1, i2, proj)) continue;
          const double piv = std::abs(kn.y(i, j) - proj);
          if (piv > best) {
            best = piv;
            bi = i;
            bj = j;
          }
        }
      }
      if (bi < 0) {
        stuck = true;
      } else {
        i1.push_back(bi);
        i2.push_back(bj);
      }
    }
    if (!stuck && schur_value(kn, k, l, i1, i2, out)) return true;
  }
  return false;
}

}  // namespace

Matrix rank_one_complete(const ObservedMatrix& m) {
  const int n1 = m.n1();
  const int n2 = m.n2();
  const auto& e = m.pattern().entries();
  const auto& vals = m.values();
  for (std::size_t k = 0; k < e.size(); ++k)
    if (vals[k] == 0.0)
      throw InvalidArgument("rank-one completion: observed entry " + pos(e[k].row, e[k].col) +
                            " is zero");
  const auto red = is_reducible(m.pattern());
  if (!red.empty_rows.empty() || !red.empty_cols.empty())
    throw InvalidArgument("rank-one completion: pattern has an unobserved row or column");
  if (red.reducible)
    throw InvalidArgument("rank-one completion: pattern is reducible (" +
                          std::to_string(red.components.size()) +
                          " components), so the completion is not unique");

  std::vector<std::vector<int>> by_row(n1);
  std::vector<std::vector<int>> by_col(n2);
  for (std::size_t k = 0; k < e.size(); ++k) {
    by_row[e[k].row].push_back(static_cast<int>(k));
    by_col[e[k].col].push_back(static_cast<int>(k));
  }
  std::vector<double> v(n1, 0.0);
  std::vector<double> w(n2, 0.0);
  std::vector<char> vset(n1, 0);
  std::vector<char> wset(n2, 0);
  // Nodes 0..n1-1 are rows, n1..n1+n2-1 columns.
  std::deque<int> queue{0};
  v[0] = 1.0;
  vset[0] = 1;
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop_front();
    if (node < n1) {
      for (int k : by_row[node]) {
        const int j = e[k].col;
        if (wset[j]) continue;
        w[j] = vals[k] / v[node];
        wset[j] = 1;
        queue.push_back(n1 + j);
      }
    } else {
      const int j = node - n1;
      for (int k : by_col[j]) {
        const int i = e[k].row;
        if (vset[i]) continue;
        v[i] = vals[k] / w[j];
        vset[i] = 1;
        queue.push_back(i);
      }
    }
  }
  Matrix y(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) y(i, j) = v[i] * w[j];
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double got = y(e[k].row, e[k].col);
    if (std::abs(got - vals[k]) > kConsistencyTol * std::abs(vals[k]))
      throw InvalidArgument("rank-one completion: no exact rank-one completion; entry " +
                            pos(e[k].row, e[k].col) + " is inconsistent with the others");
  }
  return y;
}

double schur_complete_entry(const ObservedMatrix& m, int k, int l, std::span<const int> rows,
                            std::span<const int> cols) {
  const int n1 = m.n1();
  const int n2 = m.n2();
  if (rows.empty() || rows.size() != cols.size())
    throw InvalidArgument("schur entry: index sets must be non-empty and of equal size");
  if (k < 0 || k >= n1 || l < 0 || l >= n2)
    throw InvalidArgument("schur entry: target " + pos(k, l) + " out of range");
  if (m.pattern().contains(k, l))
    throw InvalidArgument("schur entry: target " + pos(k, l) + " is observed");
  auto distinct = [](std::span<const int> s, int bound, int excluded) {
    std::vector<int> t(s.begin(), s.end());
    std::sort(t.begin(), t.end());
    if (std::adjacent_find(t.begin(), t.end()) != t.end()) return false;
    return std::all_of(t.begin(), t.end(), [&](int x) { return x >= 0 && x < bound && x != excluded; });
  };
  if (!distinct(rows, n1, k) || !distinct(cols, n2, l))
    throw InvalidArgument("schur entry: index sets must be distinct, in range, and exclude the target");
  const Known kn = from_observed(m);
  for (int i : rows) {
    if (!kn.has(i, l)) throw InvalidArgument("schur entry: entry " + pos(i, l) + " is unobserved");
    for (int j : cols)
      if (!kn.has(i, j)) throw InvalidArgument("schur entry: entry " + pos(i, j) + " is unobserved");
  }
  for (int j : cols)
    if (!kn.has(k, j)) throw InvalidArgument("schur entry: entry " + pos(k, j) + " is unobserved");
  double out = 0.0;
  if (!schur_value(kn, k, l, rows, cols, out))
    throw NumericalError("schur entry: core block is singular (condition number above 1e12)");
  return out;
}

CascadeResult schur_cascade(const ObservedMatrix& m, int r, int max_subset_search) {
  const int n1 = m.n1();
  const int n2 = m.n2();
  if (r < 1 || r >= std::min(n1, n2))
    throw InvalidArgument("schur cascade: rank " + std::to_string(r) + " out of range");
  if (max_subset_search < 1) throw InvalidArgument("schur cascade: search budget must be positive");
  Known kn = from_observed(m);
  CascadeResult res;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int k = 0; k < n1; ++k) {
      for (int l = 0; l < n2; ++l) {
        if (kn.has(k, l)) continue;
        std::vector<int> rows_pool;
        std::vector<int> cols_pool;
        for (int i = 0; i < n1; ++i)
          if (i != k && kn.has(i, l)) rows_pool.push_back(i);
        for (int j = 0; j < n2; ++j)
          if (j != l && kn.has(k, j)) cols_pool.push_back(j);
        if (static_cast<int>(rows_pool.size()) < r || static_cast<int>(cols_pool.size()) < r)
          continue;
        double value = 0.0;
        const bool ok =
            r <= 2 ? fill_exhaustive(kn, k, l, r, rows_pool, cols_pool, max_subset_search, value)
                   : fill_greedy(kn, k, l, r, rows_pool, cols_pool, max_subset_search, value);
        if (!ok) continue;
        kn.y(k, l) = value;
        kn.mask[static_cast<std::size_t>(k) * n2 + l] = 1;
        res.filled.push_back({k, l});
        progress = true;
      }
    }
  }
  res.y = std::move(kn.y);
  return res;
}

}  // namespace lrmc
