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

#include "lrmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lrmc/error.hpp"

namespace lrmc {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw InvalidArgument("matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                          std::to_string(data_.size()));
  for (double x : data_)
    if (!std::isfinite(x)) throw InvalidArgument("matrix: non-finite entry");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.front().size() : 0;
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw InvalidArgument("matrix: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

std::vector<double> Matrix::col(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<double> Matrix::vec() const {
  std::vector<double> v(data_.size());
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) v[j * rows_ + i] = (*this)(i, j);
  return v;
}

double Matrix::frobenius_norm() const {
  double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : data_) {
    const double t = x / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("matrix +: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("matrix -: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_)
    throw InvalidArgument("matrix *: inner dimensions " + std::to_string(a.cols_) + " and " +
                          std::to_string(b.rows_));
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    double* out = &c.data_[i * c.cols_];
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a.data_[i * a.cols_ + k];
      if (aik == 0.0) continue;
      const double* brow = &b.data_[k * b.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix unvec(std::span<const double> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw InvalidArgument("unvec: size mismatch");
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = v[j * rows + i];
  return m;
}

int numerical_rank(std::span<const double> sv, std::size_t rows, std::size_t cols, double tol) {
  if (tol < 0.0) throw InvalidArgument("numerical_rank: negative tolerance");
  if (sv.empty()) return 0;
  if (tol == 0.0)
    tol = static_cast<double>(std::max(rows, cols)) * sv.front() *
          std::numeric_limits<double>::epsilon();
  int r = 0;
  for (double s : sv)
    if (s > tol) ++r;
  return r;
}

int numerical_rank(const Matrix& a, double tol) {
  const auto sv = singular_values(a);
  return numerical_rank(sv, a.rows(), a.cols(), tol);
}

int relative_rank(const Matrix& a, double rel_tol) {
  const auto sv = singular_values(a);
  if (sv.empty() || sv.front() == 0.0) return 0;
  return numerical_rank(sv, a.rows(), a.cols(), rel_tol * sv.front());
}

namespace {

// Householder QR of a (rows x k). Reflector vectors are returned in the
// columns of `v` (unit leading entry folded in), with betas and R's diagonal.
struct HouseholderQr {
  Matrix v;
  std::vector<double> beta;
  std::vector<double> r_diag;
};

HouseholderQr householder_qr(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  Matrix work = a;
  HouseholderQr qr{Matrix(m, k), std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  for (std::size_t c = 0; c < k; ++c) {
    double norm2 = 0.0;
    for (std::size_t i = c; i < m; ++i) norm2 += work(i, c) * work(i, c);
    const double norm = std::sqrt(norm2);
    const double x0 = work(c, c);
    if (norm == 0.0) continue;
    const double alpha = x0 >= 0.0 ? -norm : norm;
    qr.r_diag[c] = alpha;
    qr.v(c, c) = x0 - alpha;
    for (std::size_t i = c + 1; i < m; ++i) qr.v(i, c) = work(i, c);
    qr.beta[c] = 1.0 / (norm * (norm + std::abs(x0)));
    for (std::size_t j = c + 1; j < k; ++j) {
      double s = 0.0;
      for (std::size_t i = c; i < m; ++i) s += qr.v(i, c) * work(i, j);
      s *= qr.beta[c];
      for (std::size_t i = c; i < m; ++i) work(i, j) -= s * qr.v(i, c);
    }
  }
  return qr;
}

// Applies H_0 ... H_{k-1} to the columns of x in place.
void apply_q(const HouseholderQr& qr, Matrix& x) {
  const std::size_t m = qr.v.rows();
  for (std::size_t c = qr.beta.size(); c-- > 0;) {
    if (qr.beta[c] == 0.0) continue;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = c; i < m; ++i) s += qr.v(i, c) * x(i, j);
      s *= qr.beta[c];
      for (std::size_t i = c; i < m; ++i) x(i, j) -= s * qr.v(i, c);
    }
  }
}

}  // namespace

Matrix orthonormalize(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  if (k > m) throw InvalidArgument("orthonormalize: more columns than rows");
  const HouseholderQr qr = householder_qr(a);
  double rmax = 0.0;
  for (double r : qr.r_diag) rmax = std::max(rmax, std::abs(r));
  for (std::size_t c = 0; c < k; ++c)
    if (rmax == 0.0 || std::abs(qr.r_diag[c]) <= 1e-12 * rmax)
      throw InvalidArgument("orthonormalize: input is rank deficient (column " +
                            std::to_string(c) + ")");
  Matrix q(m, k);
  for (std::size_t c = 0; c < k; ++c) q(c, c) = 1.0;
  apply_q(qr, q);
  // Positive diagonal of R, so orthonormal input is returned unchanged.
  for (std::size_t c = 0; c < k; ++c)
    if (qr.r_diag[c] < 0.0)
      for (std::size_t i = 0; i < m; ++i) q(i, c) = -q(i, c);
  return q;
}

Matrix orthogonal_complement(const Matrix& q) {
  const std::size_t m = q.rows();
  const std::size_t k = q.cols();
  if (k > m) throw InvalidArgument("orthogonal_complement: more columns than rows");
  const HouseholderQr qr = householder_qr(q);
  Matrix out(m, m - k);
  for (std::size_t c = 0; c < m - k; ++c) out(k + c, c) = 1.0;
  apply_q(qr, out);
  return out;
}

std::vector<double> kron_column(std::span<const double> g, std::span<const double> f) {
  std::vector<double> out(g.size() * f.size());
  for (std::size_t b = 0; b < g.size(); ++b)
    for (std::size_t a = 0; a < f.size(); ++a) out[b * f.size() + a] = g[b] * f[a];
  return out;
}

std::vector<double> solve_least_squares(const Matrix& a, std::span<const double> b,
                                        double rel_tol) {
  if (b.size() != a.rows()) throw InvalidArgument("least squares: rhs size mismatch");
  const SvdResult s = svd(a);
  const std::size_t k = s.singular_values.size();
  if (k < a.cols() || k == 0 || s.singular_values.front() == 0.0 ||
      s.singular_values.back() <= rel_tol * s.singular_values.front())
    throw NumericalError("least squares: system matrix is rank deficient");
  std::vector<double> coef(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += s.u(i, c) * b[i];
    coef[c] = t / s.singular_values[c];
  }
  std::vector<double> x(a.cols(), 0.0);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < a.cols(); ++j) x[j] += s.vt(c, j) * coef[c];
  return x;
}

Matrix truncate(const SvdResult& s, std::size_t r) {
  const std::size_t rows = s.u.rows();
  const std::size_t cols = s.vt.cols();
  r = std::min(r, s.singular_values.size());
  Matrix out(rows, cols);
  for (std::size_t c = 0; c < r; ++c) {
    const double sc = s.singular_values[c];
    for (std::size_t i = 0; i < rows; ++i) {
      const double ui = s.u(i, c) * sc;
      if (ui == 0.0) continue;
      double* row = &out(i, 0);
      const double* vrow = s.vt.row(c).data();
      for (std::size_t j = 0; j < cols; ++j) row[j] += ui * vrow[j];
    }
  }
  return out;
}

double nuclear_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : singular_values(a)) s += x;
  return s;
}

}  // namespace lrmc
