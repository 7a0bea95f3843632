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
#include <numeric>
#include <string>

#include "lrmc/error.hpp"
#include "lrmc/solvers.hpp"

namespace lrmc {
namespace {

// Singular value soft-thresholding: U max(S - t, 0) V^T.
Matrix shrink(const Matrix& a, double t) {
  SvdResult s = svd(a);
  std::size_t keep = 0;
  for (double& x : s.singular_values) {
    x = std::max(x - t, 0.0);
    if (x > 0.0) ++keep;
  }
  return truncate(s, keep);
}

double observed_norm(const ObservedMatrix& m) {
  double s = 0.0;
  for (double x : m.values()) s += x * x;
  return std::sqrt(s);
}

double constraint_violation(const Matrix& y, const ObservedMatrix& m, double scale) {
  return std::sqrt(weighted_fit(y, m)) / scale;
}

SolveResult admm(const ObservedMatrix& m, const NuclearConfig& cfg, double scale) {
  const auto& e = m.pattern().entries();
  const auto& vals = m.values();
  const Matrix m0 = m.zero_filled();
  // Threshold 1/rho on the scale of the observed data's spectrum.
  const double sigma1 = singular_values(m0).front();
  double rho = cfg.rho > 0.0 ? cfg.rho : 1.0 / (0.05 * sigma1);

  Matrix z = m0;
  Matrix u(m.n1(), m.n2());
  Matrix y;
  SolveResult res;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    y = shrink(z - u, 1.0 / rho);
    Matrix z_next = y + u;
    for (std::size_t k = 0; k < e.size(); ++k) z_next(e[k].row, e[k].col) = vals[k];
    u += y - z_next;
    const double primal = (y - z_next).frobenius_norm() / scale;
    const double dual = (z_next - z).frobenius_norm() / scale;
    z = std::move(z_next);
    res.iterations = it;
    if (primal < cfg.tol && dual < cfg.tol) {
      res.converged = true;
      break;
    }
    // Residual balancing; u is the scaled dual, so it scales inversely.
    if (cfg.rho <= 0.0 && it % 10 == 0) {
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u *= 0.5;
      } else if (dual > 10.0 * primal) {
        rho *= 0.5;
        u *= 2.0;
      }
    }
  }
  res.y_hat = std::move(y);
  return res;
}

SolveResult svt(const ObservedMatrix& m, const NuclearConfig& cfg, double scale) {
  const auto& e = m.pattern().entries();
  const auto& vals = m.values();
  const double n1n2 = static_cast<double>(m.n1()) * m.n2();
  double mean_abs = 0.0;
  for (double x : vals) mean_abs += std::abs(x);
  mean_abs /= static_cast<double>(vals.size());
  const double tau = cfg.tau > 0.0 ? cfg.tau : 5.0 * std::sqrt(n1n2) * mean_abs;
  const double delta = cfg.delta > 0.0 ? cfg.delta : 1.2 * n1n2 / static_cast<double>(vals.size());

  Matrix dual(m.n1(), m.n2());
  Matrix x;
  SolveResult res;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    x = shrink(dual, tau);
    const double viol = constraint_violation(x, m, scale);
    res.iterations = it;
    if (viol < cfg.tol) {
      res.converged = true;
      break;
    }
    for (std::size_t k = 0; k < e.size(); ++k)
      dual(e[k].row, e[k].col) += delta * (vals[k] - x(e[k].row, e[k].col));
  }
  res.y_hat = std::move(x);
  return res;
}

}  // namespace

SolveResult nuclear_norm_complete(const ObservedMatrix& m, const NuclearConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw InvalidArgument("nuclear: tol must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("nuclear: max_iter must be positive");
  const double scale = observed_norm(m);
  SolveResult res;
  if (scale == 0.0) {
    res.y_hat = Matrix(m.n1(), m.n2());
    res.converged = true;
  } else if (m.pattern().complement_size() == 0) {
    res.y_hat = m.zero_filled();
    res.converged = true;
  } else {
    res = cfg.method == NuclearMethod::kAdmm ? admm(m, cfg, scale) : svt(m, cfg, scale);
  }
  res.fit = scale == 0.0 ? 0.0 : constraint_violation(res.y_hat, m, scale);
  res.optimality_residuals = optimality_residual(res.y_hat, m);
  return res;
}

int rank_from_singular_values(std::span<const double> sigma, double b) {
  if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("threshold b must lie in (0, 1)");
  const double total = std::accumulate(sigma.begin(), sigma.end(), 0.0);
  if (total <= 0.0) return 0;
  double run = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    run += sigma[i];
    if (run / total > b) return static_cast<int>(i + 1);
  }
  return static_cast<int>(sigma.size());
}

int rank_from_singular_values(const Matrix& y, double b) {
  const auto sv = singular_values(y);
  return rank_from_singular_values(sv, b);
}

}  // namespace lrmc
