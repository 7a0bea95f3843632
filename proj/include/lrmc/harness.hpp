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
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lrmc/linalg.hpp"
#include "lrmc/pattern.hpp"
#include "lrmc/solvers.hpp"
#include "lrmc/stats.hpp"

namespace lrmc {

/// Deterministic child seed for replication `index` of a run seeded `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct InstanceSpec {
  int n1 = 20;
  int n2 = 25;
  int r_true = 3;
  /// Exactly one of p (Bernoulli per entry) and m (uniform, fixed size).
  std::optional<double> p;
  std::optional<long long> m;
  /// Noise standard deviation is sigma / sqrt(sample_size); sigma may be 0.
  double sigma = 0.0;
  int sample_size = 1;
  /// Optional n1 x n2 drift; observed entries get drift_ij / sqrt(N).
  std::optional<Matrix> drift;
  /// D is diagonal with entries uniform on [1, 2] times this factor.
  double signal_scale = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  NoiseModel noise_model() const;
};

struct Instance {
  Matrix y_star;
  Matrix v;  // orthonormal n1 x r
  Matrix w;  // orthonormal n2 x r
  std::vector<double> d;
  ObservedMatrix m;
  /// Sampled pattern leaves some row or column unobserved.
  bool has_empty_line = false;
};

/// Draws Y* = V D W^T, a pattern and noisy observations. Streams: factors use
/// (seed, 0), the pattern (seed, 1), noise (seed, 2).
Instance gen_instance(const InstanceSpec& spec);

/// Truth only: V, W, D and Y* from stream (seed, 0).
Instance gen_truth(const InstanceSpec& spec);

/// Random pattern for the spec's sampling rule.
ObservationPattern sample_pattern(const InstanceSpec& spec, std::mt19937_64& rng);

/// Observations of y_star on p with fresh noise drawn from rng.
ObservedMatrix observe(const Matrix& y_star, const ObservationPattern& p, const InstanceSpec& spec,
                       std::mt19937_64& rng);

/// Redraws the pattern until wellposedness_check passes at (y_star, r); throws
/// NumericalError after max_draws failures.
ObservationPattern sample_wellposed_pattern(const InstanceSpec& spec, const Matrix& y_star, int r,
                                            std::mt19937_64& rng, int max_draws = 100);

/// Plot-ready output of an experiment: one row per grid cell.
struct ExperimentResult {
  std::string name;
  std::vector<std::string> axes;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> grid;    // axis values per cell
  std::vector<std::vector<double>> values;  // column values per cell
  int replications = 0;
  std::uint64_t seed = 0;
  /// How per-replication seeds were derived from `seed`.
  std::string seed_rule;
  std::map<std::string, double> parameters;
};

ExperimentResult wellposed_probability(int n1, int n2, const std::vector<int>& r_list,
                                       const std::vector<double>& p_list, int reps,
                                       std::uint64_t seed);

struct NoiseSettings {
  double sigma = 0.0;
  int sample_size = 1;
  double signal_scale = 1.0;
};

ExperimentResult mse_compare(int n1, int n2, const std::vector<int>& r_list,
                             const std::vector<double>& p_list, const NoiseSettings& noise,
                             int reps, std::uint64_t seed);

struct QqOptions {
  /// When set, emits T_N(r, big) - T_N(r, sub) for a sub-pattern with this
  /// many fewer entries; otherwise T_N(r).
  std::optional<int> nested_extra;
  SolverConfig solver;
};

/// Fixed (Y*, pattern) from spec.seed, `reps` noise replications. Columns:
/// chi-square quantile at (k - 0.5) / reps, sorted statistic, and for the
/// nested variant the paired T_N on the sub-pattern.
ExperimentResult qq_data(const InstanceSpec& spec, int r, int reps, const QqOptions& opt = {});

struct SamplingRule {
  std::optional<double> p;
  std::optional<long long> m;
};

/// Per true rank: median |r_hat - r_true| for the sequential test at
/// alpha = 0.05 and for the singular value threshold rule on the nuclear norm
/// solution at each threshold.
ExperimentResult rank_selection_compare(int n1, int n2, const std::vector<int>& r_list,
                                        const SamplingRule& sampling, const NoiseSettings& noise,
                                        int reps, const std::vector<double>& thresholds,
                                        std::uint64_t seed);

/// The 6 x 6 symmetric example with unknown diagonal and its two rank-3
/// diagonal completions.
struct WilsonFixture {
  ObservedMatrix m;
  std::vector<double> printed_diag1;
  std::vector<double> printed_diag2;
  /// Completion with printed_diag1, rank 3 as printed.
  Matrix completion1;
  /// The rank-3 completion nearest printed_diag2, refined from the two
  /// decimal values by Gauss-Newton on the factors.
  Matrix completion2;
};

WilsonFixture wilson_fixture();

}  // namespace lrmc
