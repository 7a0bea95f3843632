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

#include <gtest/gtest.h>

#include <cmath>

#include "lrmc/error.hpp"
#include "lrmc/geometry.hpp"
#include "lrmc/harness.hpp"
#include "lrmc/random.hpp"
#include "lrmc/solvers.hpp"
#include "support.hpp"

namespace lrmc {
namespace {

using testing::bernoulli_pattern;
using testing::random_low_rank;
using testing::rel_error;

ObservedMatrix ones_fixture() {
  return ObservedMatrix(ObservationPattern(2, 2, {{0, 1}, {1, 0}, {1, 1}}), {1.0, 1.0, 1.0});
}

TEST(ObservedMatrix, ValidatesValues) {
  const ObservationPattern p(2, 2, {{0, 0}, {1, 1}});
  EXPECT_THROW(ObservedMatrix(p, {1.0}), InvalidArgument);
  EXPECT_THROW(ObservedMatrix(p, {1.0, std::nan("")}), InvalidArgument);
}

TEST(ObservedMatrix, RestrictKeepsValues) {
  const Matrix y = random_low_rank(4, 5, 2, 1);
  const auto m = ObservedMatrix::sample(y, ObservationPattern::full(4, 5));
  const ObservationPattern sub(4, 5, {{0, 0}, {3, 4}});
  const auto s = m.restrict_to(sub);
  EXPECT_EQ(s.values()[0], y(0, 0));
  EXPECT_EQ(s.values()[1], y(3, 4));
  EXPECT_THROW(s.restrict_to(ObservationPattern(4, 5, {{1, 1}})), InvalidArgument);
}

TEST(Lrma, FullObservationIsEckartYoung) {
  const Matrix a = gaussian_matrix(6, 5, 3, 0);
  const auto m = ObservedMatrix::sample(a, ObservationPattern::full(6, 5));
  const auto res = lrma_fixed_rank(m, 2);
  const auto s = svd(a);
  const Matrix best = truncate(s, 2);
  EXPECT_LT((res.y_hat - best).frobenius_norm(), 1e-10 * a.frobenius_norm());
  double tail = 0.0;
  for (std::size_t k = 2; k < s.singular_values.size(); ++k)
    tail += s.singular_values[k] * s.singular_values[k];
  EXPECT_NEAR(res.fit, tail, 1e-10 * tail);
  EXPECT_TRUE(res.converged);
}

TEST(Lrma, BlockPatternRecoversUniqueCompletion) {
  for (int r = 1; r <= 3; ++r) {
    const Matrix y = random_low_rank(7, 9, r, 10 + r);
    const auto m = ObservedMatrix::sample(y, testing::cross_pattern(7, 9, r));
    EXPECT_EQ(m.pattern().m(), static_cast<std::size_t>(r * (7 + 9 - r)));
    SolverConfig cfg;
    cfg.tol = 1e-14;
    // Linear rate close to one at m equal to the manifold dimension.
    cfg.max_iter = 300000;
    const auto res = lrma_fixed_rank(m, r, cfg);
    EXPECT_TRUE(res.converged) << "r = " << r;
    EXPECT_LT(res.fit, 1e-16 * std::pow(y.frobenius_norm(), 2)) << "r = " << r;
    EXPECT_LT(rel_error(res.y_hat, y), 1e-6) << "r = " << r;
  }
}

TEST(Lrma, NoiselessRandomInstance) {
  InstanceSpec spec;
  spec.r_true = 3;
  spec.m = 300;
  spec.seed = 4;
  const Instance inst = gen_instance(spec);
  ASSERT_TRUE(wellposedness_check(inst.y_star, 3, inst.m.pattern()).well_posed);
  SolverConfig cfg;
  cfg.tol = 1e-13;
  cfg.max_iter = 20000;
  const auto res = lrma_fixed_rank(inst.m, 3, cfg);
  EXPECT_LT(res.fit, 1e-12);
  EXPECT_LT(rel_error(res.y_hat, inst.y_star), 1e-6);
  const double s1 = singular_values(res.y_hat)[0];
  EXPECT_LT(res.optimality_residuals.first, 1e-6 * s1);
  EXPECT_LT(res.optimality_residuals.second, 1e-6 * s1);
}

TEST(Lrma, ObjectiveIsMonotone) {
  InstanceSpec spec;
  spec.r_true = 3;
  spec.m = 280;
  spec.sigma = 1.0;
  spec.seed = 8;
  const Instance inst = gen_instance(spec);
  SolverConfig cfg;
  cfg.record_trace = true;
  cfg.max_iter = 400;
  const auto res = lrma_fixed_rank(inst.m, 3, cfg);
  ASSERT_GT(res.trace.size(), 2u);
  for (std::size_t t = 1; t < res.trace.size(); ++t)
    ASSERT_LE(res.trace[t], res.trace[t - 1] * (1 + 1e-12) + 1e-300) << "iteration " << t;
}

TEST(Lrma, StationarityAtConvergenceWithNoise) {
  InstanceSpec spec;
  spec.r_true = 2;
  spec.m = 300;
  spec.sigma = 0.5;
  spec.seed = 12;
  const Instance inst = gen_instance(spec);
  SolverConfig cfg;
  cfg.tol = 1e-13;
  cfg.max_iter = 50000;
  const auto res = lrma_fixed_rank(inst.m, 2, cfg);
  ASSERT_TRUE(res.converged);
  const double s1 = singular_values(res.y_hat)[0];
  const double scale = s1 * std::sqrt(res.fit);
  EXPECT_LT(res.optimality_residuals.first, 1e-6 * scale);
  EXPECT_LT(res.optimality_residuals.second, 1e-6 * scale);
}

TEST(Lrma, RandomRestartsAgree) {
  InstanceSpec spec;
  spec.r_true = 2;
  spec.m = 250;
  spec.seed = 21;
  const Instance inst = gen_instance(spec);
  ASSERT_TRUE(wellposedness_check(inst.y_star, 2, inst.m.pattern()).well_posed);
  SolverConfig cfg;
  cfg.tol = 1e-13;
  cfg.max_iter = 20000;
  cfg.init = Init::kRandom;
  std::optional<Matrix> first;
  for (std::uint64_t s = 0; s < 5; ++s) {
    cfg.seed = s;
    const auto res = lrma_fixed_rank(inst.m, 2, cfg);
    if (res.fit >= 1e-12) continue;
    if (!first)
      first = res.y_hat;
    else
      EXPECT_LT(rel_error(res.y_hat, *first), 1e-6);
  }
  EXPECT_TRUE(first.has_value());
}

TEST(Lrma, WeightedRecoversNoiselessTruth) {
  InstanceSpec spec;
  spec.r_true = 2;
  spec.m = 300;
  spec.seed = 30;
  const Instance inst = gen_instance(spec);
  SolverConfig cfg;
  auto rng = make_rng(31, 0);
  std::uniform_real_distribution<double> wd(0.5, 2.0);
  for (std::size_t k = 0; k < inst.m.pattern().m(); ++k) cfg.weights.push_back(wd(rng));
  cfg.tol = 1e-13;
  cfg.max_iter = 20000;
  const auto res = lrma_fixed_rank(inst.m, 2, cfg);
  EXPECT_LT(rel_error(res.y_hat, inst.y_star), 1e-6);
}

TEST(Lrma, RankZeroAndValidation) {
  const auto m = ones_fixture();
  const auto res = lrma_fixed_rank(m, 0);
  EXPECT_EQ(res.y_hat.max_abs(), 0.0);
  EXPECT_DOUBLE_EQ(res.fit, 3.0);
  EXPECT_THROW(lrma_fixed_rank(m, 3), InvalidArgument);
  SolverConfig bad;
  bad.weights = {1.0, -1.0, 1.0};
  EXPECT_THROW(lrma_fixed_rank(m, 1, bad), InvalidArgument);
}

TEST(OptimalityResidual, ExactFitIsZero) {
  const Matrix y = random_low_rank(4, 5, 2, 3);
  const auto m = ObservedMatrix::sample(y, bernoulli_pattern(4, 5, 0.6, 3));
  const auto [a, b] = optimality_residual(y, m);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
}

TEST(OptimalityResidual, TruncatedSvdIsStationary) {
  const Matrix a = gaussian_matrix(7, 6, 5, 0);
  const auto m = ObservedMatrix::sample(a, ObservationPattern::full(7, 6));
  const auto s = svd(a);
  const auto [r1, r2] = optimality_residual(truncate(s, 3), m);
  const double s1sq = s.singular_values[0] * s.singular_values[0];
  EXPECT_LT(r1, 1e-9 * s1sq);
  EXPECT_LT(r2, 1e-9 * s1sq);
}

TEST(RankOne, AllOnes) {
  const Matrix y = rank_one_complete(ones_fixture());
  EXPECT_NEAR(y(0, 0), 1.0, 1e-15);
}

TEST(RankOne, DeterminantCondition) {
  const ObservedMatrix m(ObservationPattern(2, 2, {{0, 1}, {1, 0}, {1, 1}}), {2.0, 3.0, 6.0});
  EXPECT_NEAR(rank_one_complete(m)(0, 0), 1.0, 1e-15);
}

TEST(RankOne, StaircaseExactRecovery) {
  auto rng = make_rng(50, 0);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution sign(0.5);
  const auto p = testing::staircase(4);
  for (int t = 0; t < 20; ++t) {
    Matrix u(4, 1), v(4, 1);
    for (int i = 0; i < 4; ++i) {
      u(i, 0) = mag(rng) * (sign(rng) ? 1 : -1);
      v(i, 0) = mag(rng) * (sign(rng) ? 1 : -1);
    }
    const Matrix y = u * v.transpose();
    EXPECT_LT(rel_error(rank_one_complete(ObservedMatrix::sample(y, p)), y), 1e-10);
  }
}

TEST(RankOne, GaugeInvariance) {
  const auto p = bernoulli_pattern(6, 7, 0.5, 60);
  ASSERT_FALSE(is_reducible(p).reducible);
  Matrix u = gaussian_matrix(6, 1, 61, 0);
  Matrix v = gaussian_matrix(7, 1, 61, 1);
  const Matrix a = rank_one_complete(ObservedMatrix::sample(u * v.transpose(), p));
  u *= 4.0;
  v *= 0.25;
  const Matrix b = rank_one_complete(ObservedMatrix::sample(u * v.transpose(), p));
  EXPECT_LT((a - b).max_abs(), 1e-12 * a.max_abs());
}

TEST(RankOne, ReportsFailures) {
  // Inconsistent: y22 / y21 differs from y12 / y11.
  const ObservedMatrix bad(ObservationPattern::full(2, 2), {1.0, 2.0, 3.0, 5.0});
  EXPECT_THROW(rank_one_complete(bad), InvalidArgument);
  const ObservedMatrix split(testing::two_blocks(4, 4, 2, 2), std::vector<double>(8, 1.0));
  EXPECT_THROW(rank_one_complete(split), InvalidArgument);
  const ObservedMatrix gap(ObservationPattern(3, 3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}),
                           std::vector<double>(4, 1.0));
  EXPECT_THROW(rank_one_complete(gap), InvalidArgument);
}

TEST(Schur, RankOneRatio) {
  const std::vector<int> rows{1}, cols{1};
  EXPECT_NEAR(schur_complete_entry(ones_fixture(), 0, 0, rows, cols), 1.0, 1e-15);
}

TEST(Schur, IdentityCore) {
  // r = 3, core I, row of k is e1^T, column of l is e1.
  const int n = 4;
  Matrix full(n, n);
  for (int i = 1; i < n; ++i) full(i, i) = 1.0;
  full(0, 1) = 1.0;
  full(1, 0) = 1.0;
  std::vector<Index> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(i == 0 && j == 0)) e.push_back({i, j});
  const auto m = ObservedMatrix::sample(full, ObservationPattern(n, n, e));
  const std::vector<int> rows{1, 2, 3}, cols{1, 2, 3};
  EXPECT_NEAR(schur_complete_entry(m, 0, 0, rows, cols), 1.0, 1e-14);
}

TEST(Schur, RandomRankThree) {
  const int r = 3;
  const Matrix y = random_low_rank(6, 7, r, 70);
  const auto m = ObservedMatrix::sample(y, testing::cross_pattern(6, 7, r));
  const std::vector<int> rows{0, 1, 2}, cols{0, 1, 2};
  for (int k = r; k < 6; ++k)
    for (int l = r; l < 7; ++l) {
      const double v = schur_complete_entry(m, k, l, rows, cols);
      EXPECT_NEAR(v, y(k, l), 1e-8 * std::max(1.0, std::abs(y(k, l))));
    }
}

TEST(Schur, Failures) {
  const Matrix y = random_low_rank(4, 4, 1, 71);
  const auto m = ObservedMatrix::sample(y, testing::cross_pattern(4, 4, 1));
  const std::vector<int> rows{0}, cols{0};
  EXPECT_THROW(schur_complete_entry(m, 0, 1, rows, cols), InvalidArgument);  // observed target
  const std::vector<int> bad_rows{2};
  EXPECT_THROW(schur_complete_entry(m, 1, 1, bad_rows, cols), InvalidArgument);
  Matrix z = y;
  z(0, 0) = 0.0;
  const auto singular = ObservedMatrix::sample(z, testing::cross_pattern(4, 4, 1));
  EXPECT_THROW(schur_complete_entry(singular, 1, 1, rows, cols), NumericalError);
}

TEST(SchurCascade, BlockInstancesFillEverything) {
  for (int r = 1; r <= 3; ++r) {
    const Matrix y = random_low_rank(6, 8, r, 80 + r);
    const auto m = ObservedMatrix::sample(y, testing::cross_pattern(6, 8, r));
    const auto res = schur_cascade(m, r);
    EXPECT_EQ(res.filled.size(), m.pattern().complement_size());
    EXPECT_LT((res.y - y).max_abs(), 1e-8 * y.max_abs());
  }
}

TEST(SchurCascade, AgreesWithRankOne) {
  const auto p = bernoulli_pattern(6, 6, 0.5, 90);
  ASSERT_FALSE(is_reducible(p).reducible);
  const Matrix y = random_low_rank(6, 6, 1, 91);
  const auto m = ObservedMatrix::sample(y, p);
  const auto res = schur_cascade(m, 1);
  ASSERT_EQ(res.filled.size(), p.complement_size());
  EXPECT_LT((res.y - rank_one_complete(m)).max_abs(), 1e-9 * y.max_abs());
}

TEST(SchurCascade, NeverOverwritesObservations) {
  const auto p = bernoulli_pattern(7, 7, 0.6, 92);
  const Matrix y = random_low_rank(7, 7, 2, 93);
  const auto m = ObservedMatrix::sample(y, p);
  const auto res = schur_cascade(m, 2);
  for (std::size_t k = 0; k < p.m(); ++k)
    EXPECT_EQ(res.y(p.entries()[k].row, p.entries()[k].col), m.values()[k]);
}

TEST(SchurCascade, NothingToFill) {
  // Diagonal-only observations leave no (r+1) x (r+1) minor with one hole.
  const ObservedMatrix m(ObservationPattern(3, 3, {{0, 0}, {1, 1}, {2, 2}}), {1.0, 2.0, 3.0});
  const auto res = schur_cascade(m, 1);
  EXPECT_TRUE(res.filled.empty());
  EXPECT_EQ(res.y, Matrix::diagonal(std::vector<double>{1, 2, 3}));
}

TEST(Nuclear, FullObservationReturnsInput) {
  const Matrix a = gaussian_matrix(4, 5, 1, 0);
  const auto res = nuclear_norm_complete(ObservedMatrix::sample(a, ObservationPattern::full(4, 5)));
  EXPECT_LT((res.y_hat - a).max_abs(), 1e-12);
}

TEST(Nuclear, TwoByTwoClosedForm) {
  const auto res = nuclear_norm_complete(ones_fixture());
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.y_hat(0, 0), 1.0, 1e-4);
  EXPECT_NEAR(nuclear_norm(res.y_hat), 2.0, 1e-4);
}

TEST(Nuclear, SvtVariantRuns) {
  NuclearConfig cfg;
  cfg.method = NuclearMethod::kSvt;
  const auto res = nuclear_norm_complete(ones_fixture(), cfg);
  EXPECT_GT(res.iterations, 0);
  EXPECT_LT(res.fit, 1e-3);
}

TEST(Nuclear, FeasibleAndNoLargerThanZeroFill) {
  const auto p = bernoulli_pattern(8, 9, 0.6, 100);
  const auto m = ObservedMatrix::sample(random_low_rank(8, 9, 2, 101), p);
  NuclearConfig cfg;
  const auto res = nuclear_norm_complete(m, cfg);
  ASSERT_TRUE(res.converged);
  EXPECT_LT(res.fit, cfg.tol * 10);
  EXPECT_LE(nuclear_norm(res.y_hat), nuclear_norm(m.zero_filled()) + 1e-6);
}

TEST(Nuclear, WilsonPicksRankFour) {
  const auto fx = wilson_fixture();
  const auto res = nuclear_norm_complete(fx.m);
  EXPECT_EQ(relative_rank(res.y_hat, 1e-6), 4);
  EXPECT_GE(rank_from_singular_values(res.y_hat, 0.999), 4);
}

TEST(RankFromSingularValues, Cases) {
  const std::vector<double> a{3, 2, 1};
  EXPECT_EQ(rank_from_singular_values(a, 0.5), 2);
  const std::vector<double> b{1, 1, 1, 1};
  EXPECT_EQ(rank_from_singular_values(b, 0.7), 3);
  EXPECT_EQ(rank_from_singular_values(random_low_rank(5, 5, 1, 2), 0.999), 1);
  EXPECT_THROW(rank_from_singular_values(a, 1.0), InvalidArgument);
  EXPECT_THROW(rank_from_singular_values(a, 0.0), InvalidArgument);
}

}  // namespace
}  // namespace lrmc
