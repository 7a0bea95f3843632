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

#include <algorithm>
#include <cmath>

#include "lrmc/error.hpp"
#include "lrmc/linalg.hpp"
#include "lrmc/random.hpp"
#include "support.hpp"

namespace lrmc {
namespace {

Matrix gram(const Matrix& q) { return q.transpose() * q; }

double off_identity(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

Matrix reconstruct(const SvdResult& s) {
  Matrix us = s.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= s.singular_values[j];
  return us * s.vt;
}

TEST(Matrix, RejectsNonFiniteAndWrongSize) {
  EXPECT_THROW(Matrix(2, 2, {1.0, 2.0, 3.0}), InvalidArgument);
  EXPECT_THROW(Matrix(1, 2, {1.0, std::nan("")}), InvalidArgument);
  EXPECT_THROW(Matrix::from_rows({{1.0, 2.0}, {3.0}}), InvalidArgument);
}

TEST(Matrix, VecIsColumnMajor) {
  const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  const std::vector<double> expected{1, 4, 2, 5, 3, 6};
  EXPECT_EQ(a.vec(), expected);
  EXPECT_EQ(unvec(a.vec(), 2, 3), a);
}

TEST(Svd, Identity) {
  const auto s = svd(Matrix::identity(3));
  for (double x : s.singular_values) EXPECT_NEAR(x, 1.0, 1e-15);
}

TEST(Svd, DiagonalUpToSigns) {
  const std::vector<double> d{3, 2, 1};
  const auto s = svd(Matrix::diagonal(d));
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(s.singular_values[k], d[k], 1e-14);
    EXPECT_NEAR(std::abs(s.u(k, k)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(s.vt(k, k)), 1.0, 1e-14);
  }
}

TEST(Svd, SortsUnorderedDiagonal) {
  const std::vector<double> d{1, 5, 0, 2};
  const auto s = svd(Matrix::diagonal(d));
  const std::vector<double> expected{5, 2, 1, 0};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(s.singular_values[k], expected[k], 1e-14);
}

TEST(Svd, RandomFiveByFourReconstructs) {
  const Matrix a = gaussian_matrix(5, 4, 11, 0);
  const auto s = svd(a);
  EXPECT_LT((reconstruct(s) - a).frobenius_norm(), 1e-10 * s.singular_values[0] * std::sqrt(20.0));
}

TEST(Svd, RoundTripOnManyShapes) {
  auto rng = make_rng(2024, 1);
  std::uniform_int_distribution<int> dim(1, 50);
  for (int t = 0; t < 200; ++t) {
    const int r = dim(rng);
    const int c = dim(rng);
    const Matrix a = gaussian_matrix(r, c, rng);
    const auto s = svd(a);
    const double s1 = s.singular_values.front();
    ASSERT_LT((reconstruct(s) - a).frobenius_norm(), 1e-10 * s1 * std::sqrt(double(r) * c))
        << r << "x" << c;
    ASSERT_LT(off_identity(gram(s.u)), 1e-10);
    ASSERT_LT(off_identity(s.vt * s.vt.transpose()), 1e-10);
    ASSERT_TRUE(std::is_sorted(s.singular_values.rbegin(), s.singular_values.rend()));
    ASSERT_GE(s.singular_values.back(), 0.0);
  }
}

TEST(Svd, RankDeficientAndWideInputs) {
  const Matrix a = testing::random_low_rank(7, 12, 3, 5);
  const auto s = svd(a);
  EXPECT_EQ(s.singular_values.size(), 7u);
  EXPECT_LT(s.singular_values[3], 1e-12 * s.singular_values[0]);
  EXPECT_LT((reconstruct(s) - a).frobenius_norm(), 1e-12 * a.frobenius_norm());
}

TEST(Svd, Deterministic) {
  const Matrix a = gaussian_matrix(9, 6, 3, 0);
  const auto s1 = svd(a);
  const auto s2 = svd(a);
  EXPECT_EQ(s1.u, s2.u);
  EXPECT_EQ(s1.vt, s2.vt);
  EXPECT_EQ(s1.singular_values, s2.singular_values);
}

TEST(NumericalRank, ZeroMatrix) {
  EXPECT_EQ(numerical_rank(Matrix(4, 4)), 0);
  EXPECT_EQ(numerical_rank(Matrix(4, 4), 1.0), 0);
}

TEST(NumericalRank, OuterProduct) {
  const Matrix u = Matrix(4, 1, {1, -2, 3, 0.5});
  const Matrix v = Matrix(3, 1, {2, 1, -1});
  EXPECT_EQ(numerical_rank(u * v.transpose()), 1);
}

TEST(NumericalRank, MonotoneInTolerance) {
  const Matrix a = Matrix::diagonal(std::vector<double>{10, 1, 1e-3, 1e-8, 0});
  int prev = numerical_rank(a, 1e-12);
  for (double tol : {1e-9, 1e-6, 1e-2, 0.5, 2.0, 20.0}) {
    const int r = numerical_rank(a, tol);
    EXPECT_LE(r, prev);
    prev = r;
  }
  EXPECT_EQ(numerical_rank(a, 1e-9), 4);
  EXPECT_EQ(numerical_rank(a, 1e-2), 2);
  EXPECT_THROW(numerical_rank(a, -1.0), InvalidArgument);
}

TEST(Orthonormalize, SingleColumn) {
  const Matrix q = orthonormalize(Matrix(2, 1, {3, 4}));
  EXPECT_NEAR(std::abs(q(0, 0)), 0.6, 1e-15);
  EXPECT_NEAR(std::abs(q(1, 0)), 0.8, 1e-15);
  EXPECT_GT(q(0, 0) * q(1, 0), 0.0);
}

TEST(Orthonormalize, AlreadyOrthonormalUnchangedUpToSigns) {
  const Matrix q0 = orthonormalize(gaussian_matrix(6, 3, 4, 0));
  const Matrix q1 = orthonormalize(q0);
  for (std::size_t j = 0; j < 3; ++j) {
    const double sign = q0(0, j) * q1(0, j) >= 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(q1(i, j), sign * q0(i, j), 1e-12);
  }
}

TEST(Orthonormalize, GaussianFortyByTen) {
  const Matrix a = gaussian_matrix(40, 10, 8, 0);
  const Matrix q = orthonormalize(a);
  EXPECT_LT(off_identity(gram(q)), 1e-12);
  // Same span: projecting A onto span(Q) leaves nothing behind.
  const Matrix resid = a - q * (q.transpose() * a);
  EXPECT_LT(resid.frobenius_norm(), 1e-12 * a.frobenius_norm());
}

TEST(Orthonormalize, RejectsRankDeficient) {
  const Matrix a = Matrix::from_rows({{1, 2}, {2, 4}, {3, 6}});
  EXPECT_THROW(orthonormalize(a), InvalidArgument);
}

TEST(KronColumn, Scalars) {
  const std::vector<double> one{1.0};
  EXPECT_EQ(kron_column(one, one), std::vector<double>{1.0});
}

TEST(KronColumn, SmallDefinition) {
  const std::vector<double> g{1, 2};
  const std::vector<double> f{3, 4};
  const std::vector<double> expected{3, 4, 6, 8};
  EXPECT_EQ(kron_column(g, f), expected);
}

// vec(F E_ij G) against kron_column(row j of G, column i of F).
TEST(KronColumn, MatchesBruteForceVec) {
  for (const auto& [fr, fc, gr, gc] : {std::array{3, 3, 3, 3}, std::array{3, 4, 4, 3}}) {
    const Matrix f = gaussian_matrix(fr, fc, 21, fc);
    const Matrix g = gaussian_matrix(gr, gc, 22, gr);
    for (int i = 0; i < fc; ++i) {
      for (int j = 0; j < gr; ++j) {
        Matrix e(fc, gr);
        e(i, j) = 1.0;
        const auto brute = (f * e * g).vec();
        const auto kc = kron_column(g.row(j), f.col(i));
        ASSERT_EQ(brute.size(), kc.size());
        for (std::size_t k = 0; k < kc.size(); ++k) ASSERT_NEAR(brute[k], kc[k], 1e-12);
      }
    }
  }
}

TEST(LeastSquares, SolvesOverdetermined) {
  const Matrix a = Matrix::from_rows({{1, 0}, {0, 1}, {1, 1}});
  const std::vector<double> b{1, 2, 3};
  const auto x = solve_least_squares(a, b);
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_NEAR(x[1], 2.0, 1e-12);
}

TEST(Truncate, EckartYoung) {
  const Matrix a = gaussian_matrix(8, 6, 31, 0);
  const auto s = svd(a);
  const Matrix t = truncate(s, 2);
  double tail = 0.0;
  for (std::size_t k = 2; k < s.singular_values.size(); ++k)
    tail += s.singular_values[k] * s.singular_values[k];
  EXPECT_NEAR(std::pow((a - t).frobenius_norm(), 2), tail, 1e-10 * tail);
  EXPECT_EQ(numerical_rank(t), 2);
}

TEST(NuclearNorm, SumOfSingularValues) {
  EXPECT_NEAR(nuclear_norm(Matrix::diagonal(std::vector<double>{3, -2, 1})), 6.0, 1e-14);
}

}  // namespace
}  // namespace lrmc
