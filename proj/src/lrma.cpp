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

#include <algorithm>
#include <cmath>
#include <string>

#include "lrmc/error.hpp"
#include "lrmc/random.hpp"
#include "lrmc/solvers.hpp"

namespace lrmc {

ObservedMatrix::ObservedMatrix(ObservationPattern pattern, std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (values_.size() != pattern_.m())
    throw InvalidArgument("observed matrix: " + std::to_string(values_.size()) + " values for " +
                          std::to_string(pattern_.m()) + " observed entries");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("observed matrix: non-finite value");
}

ObservedMatrix ObservedMatrix::sample(const Matrix& full, ObservationPattern pattern) {
  if (full.rows() != static_cast<std::size_t>(pattern.n1()) ||
      full.cols() != static_cast<std::size_t>(pattern.n2()))
    throw InvalidArgument("observed matrix: shape does not match pattern");
  std::vector<double> v;
  v.reserve(pattern.m());
  for (const auto& [i, j] : pattern.entries()) v.push_back(full(i, j));
  return {std::move(pattern), std::move(v)};
}

Matrix ObservedMatrix::zero_filled() const {
  Matrix z(n1(), n2());
  const auto& e = pattern_.entries();
  for (std::size_t k = 0; k < e.size(); ++k) z(e[k].row, e[k].col) = values_[k];
  return z;
}

ObservedMatrix ObservedMatrix::restrict_to(const ObservationPattern& sub) const {
  if (!sub.is_subset_of(pattern_))
    throw InvalidArgument("observed matrix: sub-pattern is not contained in the pattern");
  std::vector<double> v;
  v.reserve(sub.m());
  for (const auto& [i, j] : sub.entries()) v.push_back(values_[pattern_.position(i, j)]);
  return {sub, std::move(v)};
}

double weighted_fit(const Matrix& y, const ObservedMatrix& m, std::span<const double> weights) {
  const auto& e = m.pattern().entries();
  double f = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double d = m.values()[k] - y(e[k].row, e[k].col);
    f += (weights.empty() ? 1.0 : weights[k]) * d * d;
  }
  return f;
}

std::pair<double, double> optimality_residual(const Matrix& y, const ObservedMatrix& m,
                                              std::span<const double> weights) {
  if (y.rows() != static_cast<std::size_t>(m.n1()) || y.cols() != static_cast<std::size_t>(m.n2()))
    throw InvalidArgument("optimality_residual: shape mismatch");
  Matrix r(m.n1(), m.n2());
  const auto& e = m.pattern().entries();
  for (std::size_t k = 0; k < e.size(); ++k)
    r(e[k].row, e[k].col) =
        (weights.empty() ? 1.0 : weights[k]) * (y(e[k].row, e[k].col) - m.values()[k]);
  return {(r.transpose() * y).frobenius_norm(), (y * r.transpose()).frobenius_norm()};
}

namespace {

double relative_change(const Matrix& next, const Matrix& prev) {
  const double denom = prev.frobenius_norm();
  const double diff = (next - prev).frobenius_norm();
  if (denom == 0.0) return diff == 0.0 ? 0.0 : 1.0;
  return diff / denom;
}

bool uniform(std::span<const double> w) {
  return w.empty() || std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); });
}

Matrix random_start(const ObservedMatrix& m, int r, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x696e6974u);
  const Matrix v = gaussian_matrix(m.n1(), r, rng);
  const Matrix w = gaussian_matrix(m.n2(), r, rng);
  Matrix y = v * w.transpose();
  // Match the scale of the data: mean square of y over all cells equals the
  // mean square of the observations.
  double ms = 0.0;
  for (double x : m.values()) ms += x * x;
  ms /= static_cast<double>(m.values().size());
  const double ys = y.frobenius_norm() / std::sqrt(static_cast<double>(y.size()));
  if (ys > 0.0) y *= std::sqrt(ms) / ys;
  return y;
}

SolveResult impute_and_project(const ObservedMatrix& m, int r, const SolverConfig& cfg) {
  const auto& e = m.pattern().entries();
  const auto& vals = m.values();
  Matrix y = cfg.init == Init::kRandom ? random_start(m, r, cfg.seed) : m.zero_filled();
  SolveResult res;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    Matrix z = y;
    for (std::size_t k = 0; k < e.size(); ++k) z(e[k].row, e[k].col) = vals[k];
    Matrix next = truncate(svd(z), static_cast<std::size_t>(r));
    const double change = relative_change(next, y);
    y = std::move(next);
    res.iterations = it;
    if (cfg.record_trace) res.trace.push_back(weighted_fit(y, m));
    if (change < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.y_hat = std::move(y);
  return res;
}

// Minimum-norm solution of the small symmetric system a x = b.
std::vector<double> solve_small(const Matrix& a, const std::vector<double>& b) {
  const SvdResult s = svd(a);
  const std::size_t n = b.size();
  std::vector<double> x(n, 0.0);
  const double cut = s.singular_values.empty() ? 0.0 : 1e-12 * s.singular_values.front();
  for (std::size_t c = 0; c < s.singular_values.size(); ++c) {
    if (s.singular_values[c] <= cut || s.singular_values[c] == 0.0) continue;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += s.u(i, c) * b[i];
    t /= s.singular_values[c];
    for (std::size_t j = 0; j < n; ++j) x[j] += s.vt(c, j) * t;
  }
  return x;
}

SolveResult alternating_weighted(const ObservedMatrix& m, int r, const SolverConfig& cfg) {
  const auto& e = m.pattern().entries();
  const auto& vals = m.values();
  const auto& wts = cfg.weights;
  const int n1 = m.n1();
  const int n2 = m.n2();

  // Start from the unweighted solution's balanced factors.
  SolverConfig warm = cfg;
  warm.weights.clear();
  warm.max_iter = std::min(cfg.max_iter, 50);
  warm.record_trace = false;
  const Matrix y0 = impute_and_project(m, r, warm).y_hat;
  const SvdResult s0 = svd(y0);
  Matrix v(n1, r);
  Matrix w(n2, r);
  for (int c = 0; c < r; ++c) {
    const double sq = std::sqrt(s0.singular_values[c]);
    for (int i = 0; i < n1; ++i) v(i, c) = s0.u(i, c) * sq;
    for (int j = 0; j < n2; ++j) w(j, c) = s0.vt(c, j) * sq;
  }

  std::vector<std::vector<int>> by_row(n1);
  std::vector<std::vector<int>> by_col(n2);
  for (std::size_t k = 0; k < e.size(); ++k) {
    by_row[e[k].row].push_back(static_cast<int>(k));
    by_col[e[k].col].push_back(static_cast<int>(k));
  }

  auto update = [&](Matrix& target, const Matrix& other, const std::vector<std::vector<int>>& groups,
                    bool rows) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      Matrix a(r, r);
      std::vector<double> b(r, 0.0);
      for (int k : groups[g]) {
        const int o = rows ? e[k].col : e[k].row;
        const double wk = wts[k];
        for (int p = 0; p < r; ++p) {
          b[p] += wk * vals[k] * other(o, p);
          for (int q = 0; q < r; ++q) a(p, q) += wk * other(o, p) * other(o, q);
        }
      }
      const auto x = solve_small(a, b);
      for (int p = 0; p < r; ++p) target(g, p) = x[p];
    }
  };

  SolveResult res;
  Matrix y = v * w.transpose();
  for (int it = 1; it <= cfg.max_iter; ++it) {
    update(v, w, by_row, true);
    update(w, v, by_col, false);
    Matrix next = v * w.transpose();
    const double change = relative_change(next, y);
    y = std::move(next);
    res.iterations = it;
    if (cfg.record_trace) res.trace.push_back(weighted_fit(y, m, wts));
    if (change < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.y_hat = std::move(y);
  return res;
}

}  // namespace

SolveResult lrma_fixed_rank(const ObservedMatrix& m, int r, const SolverConfig& cfg) {
  const int kmax = std::min(m.n1(), m.n2());
  if (r < 0 || r > kmax)
    throw InvalidArgument("lrma: rank " + std::to_string(r) + " outside [0, " +
                          std::to_string(kmax) + "]");
  if (!(cfg.tol > 0.0)) throw InvalidArgument("lrma: tol must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("lrma: max_iter must be positive");
  if (!cfg.weights.empty()) {
    if (cfg.weights.size() != m.pattern().m())
      throw InvalidArgument("lrma: expected one weight per observed entry");
    for (double w : cfg.weights)
      if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("lrma: weights must be positive");
  }

  SolveResult res;
  if (r == 0) {
    res.y_hat = Matrix(m.n1(), m.n2());
    res.converged = true;
  } else if (uniform(cfg.weights)) {
    res = impute_and_project(m, r, cfg);
  } else {
    res = alternating_weighted(m, r, cfg);
  }
  res.fit = weighted_fit(res.y_hat, m, cfg.weights);
  res.optimality_residuals = optimality_residual(res.y_hat, m, cfg.weights);
  return res;
}

}  // namespace lrmc
