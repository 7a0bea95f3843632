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

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lrmc/linalg.hpp"
#include "lrmc/pattern.hpp"
#include "lrmc/solvers.hpp"

namespace lrmc {

/// Central chi-square CDF, P(df/2, x/2).
double chi2_cdf(double x, int df);
/// Upper tail 1 - chi2_cdf, computed without cancellation.
double chi2_sf(double x, int df);
/// Inverse of chi2_cdf for p in [0, 1).
double chi2_quantile(double p, int df);

struct KsResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 0.0;    // asymptotic Kolmogorov tail
};

/// One-sample Kolmogorov-Smirnov test of `sample` against `cdf`.
KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Pearson sample correlation.
double correlation(std::span<const double> a, std::span<const double> b);

/// m - r (n1 + n2 - r); nonpositive means the model is saturated.
long long degrees_of_freedom(int r, int n1, int n2, long long m);

/// Observation noise: M_ij = Y*_ij + drift_ij / sqrt(N) + eps_ij with
/// eps_ij ~ N(0, sigma_ij^2 / N). sigma holds one scalar or one value per
/// observed entry; drift is empty (zero) or one value per observed entry.
struct NoiseModel {
  int n = 1;
  std::vector<double> sigma{1.0};
  std::vector<double> drift;

  /// Throws InvalidArgument unless the model fits m observed entries.
  void validate(std::size_t m) const;
  double sigma_at(std::size_t k) const { return sigma.size() == 1 ? sigma[0] : sigma[k]; }
  double drift_at(std::size_t k) const { return drift.empty() ? 0.0 : drift[k]; }
  /// 1 / sigma_ij^2 per observed entry.
  std::vector<double> weights(std::size_t m) const;
  /// The model on a sub-pattern of `full`.
  NoiseModel restrict(const ObservationPattern& full, const ObservationPattern& sub) const;
};

struct TestStatistic {
  double value = 0.0;  // N * min sum w_ij (M_ij - Y_ij)^2
  long long df = 0;
  bool converged = false;
  int iterations = 0;
};

/// T_N(r) with weights 1/sigma_ij^2, the minimum taken from lrma_fixed_rank.
TestStatistic test_statistic(const ObservedMatrix& m, int r, const NoiseModel& noise,
                             const SolverConfig& cfg = {});

struct RankTestRow {
  int r = 0;
  double t_n = 0.0;
  long long df = 0;
  double p_value = 0.0;
  bool converged = false;
};

struct RankTestReport {
  std::vector<RankTestRow> rows;
  std::optional<int> selected_rank;
  double alpha = 0.05;
  int r_max = 0;
};

struct RankScan {
  /// Largest rank tried; defaults to ceil of the generic bound.
  std::optional<int> r_max;
  /// Stop after the first accepted rank instead of filling the ladder.
  bool stop_on_accept = false;
};

/// Tests r = 1, 2, ... while df > 0 and r <= r_max; p = 1 - chi2_cdf(T, df)
/// and the selected rank is the first with p > alpha.
RankTestReport sequential_rank_test(const ObservedMatrix& m, const NoiseModel& noise, double alpha,
                                    const SolverConfig& cfg = {}, const RankScan& scan = {});

struct NestedTestResult {
  double delta_t = 0.0;   // T_N(r, big) - T_N(r, sub)
  long long delta_df = 0; // m' - m
  double t_big = 0.0;
  double t_sub = 0.0;
};

/// Difference test between a pattern and a sub-pattern of it. The noise
/// model is given on the big pattern.
NestedTestResult nested_test(const ObservedMatrix& m_big, const ObservationPattern& sub, int r,
                             const NoiseModel& noise, const SolverConfig& cfg = {});

/// min over H in the tangent space at Y* of sum sigma_ij^-2 (drift_ij - H_ij)^2.
/// Throws NumericalError when the tangent projection is ill-posed.
double noncentrality(const Matrix& y_star, int r, const ObservationPattern& p,
                     const NoiseModel& noise);

struct VarianceEstimate {
  std::vector<double> mean;
  std::vector<double> variance;  // (N - 1)^-1 sum (x - mean)^2
};

/// Per-entry sample mean and variance over N >= 2 replicates, each aligned
/// with the same pattern.
VarianceEstimate estimate_variances(const std::vector<std::vector<double>>& replicates);

struct TangentApproximation {
  double solver_min = 0.0;   // sum w (M - Y_hat)^2 from lrma_fixed_rank
  double tangent_min = 0.0;  // min over H in T(Y*) of sum w (M - Y* - H)^2
  double gap = 0.0;          // |solver_min - tangent_min|
};

/// Compares the fitted minimum with its linearization around Y*.
TangentApproximation tangent_approximation(const ObservedMatrix& m, const Matrix& y_star, int r,
                                           std::span<const double> weights = {},
                                           const SolverConfig& cfg = {});

}  // namespace lrmc
