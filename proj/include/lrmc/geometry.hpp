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
#include <vector>

#include "lrmc/linalg.hpp"
#include "lrmc/pattern.hpp"

namespace lrmc {

/// Default relative threshold tau; a singular value counts toward a rank when
/// it exceeds tau * sigma_1.
inline constexpr double kDefaultRankTol = 1e-9;

/// Annihilators of a rank-r matrix Y: F Y = 0 and Y G = 0, both of full rank
/// with orthonormal rows (F) and columns (G).
struct Complements {
  Matrix f;  // (n1 - r) x n1
  Matrix g;  // n2 x (n2 - r)
};

/// F from the trailing left singular directions of Y, G from the trailing
/// right ones. Throws InvalidArgument when the numerical rank of Y at
/// rel_tol * sigma_1 differs from r.
Complements complements(const Matrix& y, int r, double rel_tol = kDefaultRankTol);

struct WellPosednessReport {
  int rank = 0;
  /// Numerical rank of the Kronecker-column matrix K; empty when a necessary
  /// condition (dimension, per-line counts, irreducibility) already failed
  /// and K was never factored.
  std::optional<int> rank_of_k;
  long long required_rank = 0;  // n1 n2 - m
  bool well_posed = false;
  bool dimension_ok = false;    // (n1 - r)(n2 - r) >= n1 n2 - m
  bool min_counts_ok = false;
  bool irreducible = false;
  double tol_used = kDefaultRankTol;
  /// Smallest singular value of K relative to its largest, when computed.
  std::optional<double> k_condition;
};

/// Builds K whose column for each unobserved (i, j) is
/// kron_column(row j of G, column i of F) and decides well-posedness from its
/// rank. Empty complement is vacuously well-posed.
WellPosednessReport wellposedness_check(const Matrix& y, int r, const ObservationPattern& p,
                                        double rel_tol = kDefaultRankTol);

/// The (n1-r)(n2-r) x |complement| matrix used by wellposedness_check.
Matrix kron_matrix(const Complements& c, const ObservationPattern& p);

/// Frobenius-orthonormal basis of the tangent space of the rank-r manifold at
/// Y: {u_a v_b^T} over leading/trailing singular vector pairs, excluding the
/// trailing-trailing block. Exactly r(n1 + n2 - r) elements.
struct TangentBasis {
  std::vector<Matrix> basis;
  long long dim = 0;
};

TangentBasis tangent_basis(const Matrix& y, int r, double rel_tol = kDefaultRankTol);

/// Weighted least-squares fit of a tangent vector to values on the pattern.
struct TangentProjection {
  Matrix h;                 // argmin over the tangent space
  double residual = 0.0;    // sum w_ij (w_in_ij - h_ij)^2 over the pattern
};

/// Minimizes sum_{(i,j) in p} weights_k (values_k - H_ij)^2 over H in the
/// tangent space at Y. values/weights are aligned with p.entries(); empty
/// weights mean unit weights. Throws NumericalError when the problem has no
/// unique minimizer (well-posedness fails).
TangentProjection project_tangent(std::span<const double> values, const Matrix& y, int r,
                                  const ObservationPattern& p,
                                  std::span<const double> weights = {},
                                  double rel_tol = kDefaultRankTol);

/// Jacobian of (V, W, X) -> V W^T + X with X supported on the complement of p.
/// Rows are parameters (V entries row-major, then W entries row-major, then
/// complement positions), columns are vec positions (column-major).
Matrix jacobian(const Matrix& v, const Matrix& w, const ObservationPattern& p);

struct CharRankResult {
  int rank = 0;
  int rho = 0;
  long long f_rm = 0;
  int trials = 0;
  std::vector<int> ranks_per_trial;
  bool generic_well_posed = false;
  double tol_used = kDefaultRankTol;
  std::uint64_t seed = 0;
};

/// Jacobian rank at standard Gaussian (V, W) draws; trial t uses the stream
/// seeded from (seed, t) so results do not depend on evaluation order.
CharRankResult characteristic_rank(const ObservationPattern& p, int r, int trials,
                                   std::uint64_t seed, double rel_tol = kDefaultRankTol);

}  // namespace lrmc
