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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lrmc/linalg.hpp"
#include "lrmc/pattern.hpp"

namespace lrmc {

/// A pattern together with one finite value per observed entry, aligned with
/// pattern().entries().
class ObservedMatrix {
 public:
  ObservedMatrix() = default;
  ObservedMatrix(ObservationPattern pattern, std::vector<double> values);
  /// Observes `full` on the given pattern.
  static ObservedMatrix sample(const Matrix& full, ObservationPattern pattern);

  const ObservationPattern& pattern() const { return pattern_; }
  const std::vector<double>& values() const { return values_; }
  int n1() const { return pattern_.n1(); }
  int n2() const { return pattern_.n2(); }

  /// P_Omega(M) as a dense matrix with zeros on the complement.
  Matrix zero_filled() const;
  /// Values of `other` restricted to a sub-pattern; throws InvalidArgument if
  /// `sub` is not contained in this pattern.
  ObservedMatrix restrict_to(const ObservationPattern& sub) const;

 private:
  ObservationPattern pattern_;
  std::vector<double> values_;
};

enum class Init { kZeroFill, kRandom };

struct SolverConfig {
  double tol = 1e-10;   // relative Frobenius change between iterates
  int max_iter = 5000;
  /// Positive weight per observed entry; empty means unit weights.
  std::vector<double> weights;
  Init init = Init::kZeroFill;
  std::uint64_t seed = 0;
  /// Keep the objective after every iteration in SolveResult::trace.
  bool record_trace = false;
};

struct SolveResult {
  Matrix y_hat;
  /// LRMA: sum w_ij (M_ij - Y_ij)^2. Nuclear: relative constraint violation.
  double fit = 0.0;
  int iterations = 0;
  bool converged = false;
  std::pair<double, double> optimality_residuals{0.0, 0.0};
  std::vector<double> trace;
};

/// Fixed-rank least squares. Unit (or constant) weights use impute-and-project:
/// Y <- best rank-r approximation of P_Omega(M) + P_complement(Y). Non-uniform
/// weights use alternating weighted least squares over factors (V, W).
SolveResult lrma_fixed_rank(const ObservedMatrix& m, int r, const SolverConfig& cfg = {});

/// (||R^T Y||_F, ||Y R^T||_F) with R = P_Omega(Y) - M, the first-order
/// stationarity residuals of fixed-rank least squares.
/// With weights, R is scaled entrywise by w_ij.
std::pair<double, double> optimality_residual(const Matrix& y, const ObservedMatrix& m,
                                              std::span<const double> weights = {});

/// Weighted objective sum w_ij (M_ij - Y_ij)^2 over the pattern.
double weighted_fit(const Matrix& y, const ObservedMatrix& m, std::span<const double> weights = {});

/// Exact rank-one completion by propagation from v_1 = 1 over the row/column
/// graph. Preconditions: nonzero observations, no empty row or column,
/// irreducible pattern, consistent data (relative 1e-9 per entry).
Matrix rank_one_complete(const ObservedMatrix& m);

/// M[k, I2] M[I1, I2]^{-1} M[I1, l]: the value of an unobserved (k, l) that
/// makes the (r+1) x (r+1) minor on rows {k} + I1, columns {l} + I2 singular.
/// Throws InvalidArgument when a needed entry is unobserved and
/// NumericalError when M[I1, I2] has condition number above 1e12.
double schur_complete_entry(const ObservedMatrix& m, int k, int l, std::span<const int> rows,
                            std::span<const int> cols);

struct CascadeResult {
  Matrix y;                  // observed entries, filled entries, zeros elsewhere
  std::vector<Index> filled; // in the order they were filled
};

/// Repeatedly fills unobserved entries that admit a Schur-complement formula
/// over already known entries until no more progress is possible. Subset
/// search is exhaustive for r <= 2 and greedy (pivoted) otherwise; at most
/// max_subset_search candidate subsets are tried per entry and pass.
CascadeResult schur_cascade(const ObservedMatrix& m, int r, int max_subset_search = 2000);

enum class NuclearMethod {
  /// Douglas-Rachford splitting of min ||Y||_* s.t. P_Omega(Y) = M; each step
  /// is a singular value thresholding. Converges to the exact minimizer.
  kAdmm,
  /// Classical singular value thresholding with shrinkage tau and step delta;
  /// solves the tau-regularized surrogate.
  kSvt,
};

struct NuclearConfig {
  NuclearMethod method = NuclearMethod::kAdmm;
  double tol = 1e-9;
  int max_iter = 20000;
  /// kSvt: defaults to 5 sqrt(n1 n2) mean|M| when <= 0.
  double tau = 0.0;
  /// kSvt: defaults to 1.2 n1 n2 / m when <= 0.
  double delta = 0.0;
  /// kAdmm: penalty; defaults from the data scale when <= 0.
  double rho = 0.0;
};

/// Nuclear norm minimization subject to P_Omega(Y) = M. fit is the relative
/// constraint violation ||P_Omega(Y) - M||_F / ||M||_F.
SolveResult nuclear_norm_complete(const ObservedMatrix& m, const NuclearConfig& cfg = {});

/// Smallest r with sum_{i<=r} sigma_i / sum_i sigma_i > b.
int rank_from_singular_values(std::span<const double> sigma, double b);
int rank_from_singular_values(const Matrix& y, double b);

}  // namespace lrmc
