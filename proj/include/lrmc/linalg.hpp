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
#include <span>
#include <vector>

namespace lrmc {

/// Dense real matrix, row-major. Entries are finite on construction.
class Matrix {
 public:
  Matrix() = default;
  /// Zero-filled rows x cols matrix.
  Matrix(std::size_t rows, std::size_t cols);
  /// Takes row-major entries; throws InvalidArgument on a size mismatch or a
  /// non-finite entry.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  /// Builds from nested rows, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<double> col(std::size_t j) const;

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  Matrix transpose() const;
  /// Column-major stacking, the vec(.) used by vec(ABC) = (C^T kron A) vec(B).
  std::vector<double> vec() const;
  double frobenius_norm() const;
  double max_abs() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Inverse of Matrix::vec.
Matrix unvec(std::span<const double> v, std::size_t rows, std::size_t cols);

/// Thin SVD: a = u * diag(singular_values) * vt with k = min(rows, cols).
struct SvdResult {
  Matrix u;                              // rows x k, orthonormal columns
  std::vector<double> singular_values;   // nonincreasing, nonnegative
  Matrix vt;                             // k x cols, orthonormal rows
};

/// Golub-Kahan bidiagonalization followed by implicitly shifted QR on the
/// bidiagonal. Deterministic. Throws NumericalError on non-convergence.
SvdResult svd(const Matrix& a);

/// Singular values only; skips accumulating the orthogonal factors.
std::vector<double> singular_values(const Matrix& a);

/// Count of singular values strictly above tol. tol == 0 selects
/// max(rows, cols) * sigma_1 * machine epsilon.
int numerical_rank(const Matrix& a, double tol = 0.0);
int numerical_rank(std::span<const double> singular_values, std::size_t rows,
                   std::size_t cols, double tol = 0.0);

/// Rank with a threshold relative to the largest singular value.
int relative_rank(const Matrix& a, double rel_tol);

/// Orthonormal basis of the column span (Householder QR). Requires
/// cols <= rows and full column rank; throws InvalidArgument otherwise.
Matrix orthonormalize(const Matrix& a);

/// Orthonormal basis (as columns) of the orthogonal complement of the span of
/// the orthonormal columns of q. Result is rows x (rows - cols).
Matrix orthogonal_complement(const Matrix& q);

/// g^T kron f for a row vector g (length q) and column vector f (length p):
/// entry (b * p + a) is g[b] * f[a]. Matches the block order of
/// vec(F X G) = (G^T kron F) vec(X).
std::vector<double> kron_column(std::span<const double> g, std::span<const double> f);

/// Minimum-norm least squares solution of a x = b via SVD. Throws
/// NumericalError when a is rank deficient at relative tolerance rel_tol.
std::vector<double> solve_least_squares(const Matrix& a, std::span<const double> b,
                                        double rel_tol = 1e-12);

/// Best rank-r approximation from a precomputed SVD.
Matrix truncate(const SvdResult& s, std::size_t r);

/// Sum of singular values.
double nuclear_norm(const Matrix& a);

}  // namespace lrmc
