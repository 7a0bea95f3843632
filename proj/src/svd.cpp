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

// Golub-Kahan-Reinsch SVD. The working copy is row-major m x n with m >= n;
// the orthogonal factors are accumulated transposed (one factor column per
// contiguous row) so that every inner loop runs over contiguous memory.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lrmc/error.hpp"
#include "lrmc/linalg.hpp"

namespace lrmc {
namespace {

constexpr int kMaxSweepsPerValue = 75;
constexpr double kSplitFactor = 8.0;

// Overwrites x with a Householder vector v so that (I - beta v v^T) x_in =
// alpha e_1. A length-one or zero vector yields beta = 0 (identity).
struct Reflector {
  double beta = 0.0;
  double alpha = 0.0;
};

Reflector make_reflector(double* x, std::size_t len, std::size_t stride) {
  Reflector h;
  const double x0 = x[0];
  if (len <= 1) {
    h.alpha = x0;
    return h;
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < len; ++i) scale = std::max(scale, std::abs(x[i * stride]));
  if (scale == 0.0) return h;
  double ss = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double t = x[i * stride] / scale;
    ss += t * t;
  }
  const double norm = scale * std::sqrt(ss);
  h.alpha = x0 >= 0.0 ? -norm : norm;
  x[0] = x0 - h.alpha;
  h.beta = 1.0 / (norm * (norm + std::abs(x0)));
  return h;
}

// Working state of one decomposition.
struct Bidiagonal {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> a;     // m x n row-major, holds reflector vectors after reduction
  std::vector<double> d;     // diagonal, length n
  std::vector<double> e;     // e[i] couples i-1 and i; e[0] = 0
  std::vector<double> left_beta;
  std::vector<double> right_beta;
};

// One sweep over the trailing block per step: each row receives the left
// update, then the right update, and contributes to the dot products that the
// next left reflector needs.
void bidiagonalize(Bidiagonal& b) {
  const std::size_t m = b.m;
  const std::size_t n = b.n;
  auto& a = b.a;
  b.d.assign(n, 0.0);
  b.e.assign(n, 0.0);
  b.left_beta.assign(n, 0.0);
  b.right_beta.assign(n, 0.0);
  // acc[j] = sum_{i >= k} a[i][k] a[i][j] for the current column k.
  std::vector<double> acc(n, 0.0);
  std::vector<double> next(n, 0.0);
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = &a[i * n];
    const double x = row[0];
    for (std::size_t j = 1; j < n; ++j) acc[j] += x * row[j];
  }

  for (std::size_t k = 0; k < n; ++k) {
    const Reflector hl = make_reflector(&a[k * n + k], m - k, n);
    b.d[k] = hl.alpha;
    b.left_beta[k] = hl.beta;
    if (k + 1 >= n) break;
    const bool left = hl.beta != 0.0;
    if (left) {
      double* rowk = &a[k * n];
      const double f = hl.beta * rowk[k];
      for (std::size_t j = k + 1; j < n; ++j) {
        w[j] = acc[j] - hl.alpha * rowk[j];
        rowk[j] -= f * w[j];
      }
    }
    double* x = &a[k * n + k + 1];
    const std::size_t len = n - k - 1;
    const Reflector hr = make_reflector(x, len, 1);
    b.e[k + 1] = hr.alpha;
    b.right_beta[k] = hr.beta;
    const bool right = hr.beta != 0.0;

    std::fill(next.begin() + k + 1, next.end(), 0.0);
    for (std::size_t i = k + 1; i < m; ++i) {
      double* row = &a[i * n + k + 1];
      if (left) {
        const double f = hl.beta * a[i * n + k];
        const double* wk = &w[k + 1];
        for (std::size_t j = 0; j < len; ++j) row[j] -= f * wk[j];
      }
      if (right) {
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) s += row[j] * x[j];
        s *= hr.beta;
        for (std::size_t j = 0; j < len; ++j) row[j] -= s * x[j];
      }
      const double lead = row[0];
      double* nx = &next[k + 1];
      for (std::size_t j = 1; j < len; ++j) nx[j] += lead * row[j];
    }
    std::swap(acc, next);
  }
}

// Ut is n x m: row c holds column c of U = H_0 ... H_{n-1} [I; 0].
std::vector<double> accumulate_left(const Bidiagonal& b) {
  const std::size_t m = b.m;
  const std::size_t n = b.n;
  std::vector<double> ut(n * m, 0.0);
  for (std::size_t c = 0; c < n; ++c) ut[c * m + c] = 1.0;
  std::vector<double> v(m);
  for (std::size_t kk = n; kk-- > 0;) {
    const double beta = b.left_beta[kk];
    if (beta == 0.0) continue;
    for (std::size_t i = kk; i < m; ++i) v[i] = b.a[i * n + kk];
    for (std::size_t c = kk; c < n; ++c) {
      double* col = &ut[c * m];
      double s = 0.0;
      for (std::size_t i = kk; i < m; ++i) s += v[i] * col[i];
      s *= beta;
      for (std::size_t i = kk; i < m; ++i) col[i] -= s * v[i];
    }
  }
  return ut;
}

// Vt is n x n: row c holds column c of V = G_0 ... G_{n-2}.
std::vector<double> accumulate_right(const Bidiagonal& b) {
  const std::size_t n = b.n;
  std::vector<double> vt(n * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) vt[c * n + c] = 1.0;
  for (std::size_t kk = n >= 2 ? n - 1 : 0; kk-- > 0;) {
    const double beta = b.right_beta[kk];
    if (beta == 0.0) continue;
    const double* v = &b.a[kk * n];  // entries kk+1..n-1
    for (std::size_t c = kk + 1; c < n; ++c) {
      double* col = &vt[c * n];
      double s = 0.0;
      for (std::size_t i = kk + 1; i < n; ++i) s += v[i] * col[i];
      s *= beta;
      for (std::size_t i = kk + 1; i < n; ++i) col[i] -= s * v[i];
    }
  }
  return vt;
}

inline void rotate(double* x, double* y, std::size_t len, double c, double s) {
  for (std::size_t j = 0; j < len; ++j) {
    const double p = x[j];
    const double q = y[j];
    x[j] = p * c + q * s;
    y[j] = q * c - p * s;
  }
}

// Implicit-shift QR on the bidiagonal (d, e). ut (n rows of length m) and vt
// (n rows of length n) receive the rotations when non-null.
void diagonalize(std::vector<double>& w, std::vector<double>& rv1, std::size_t m,
                 std::size_t n, double* ut, double* vt) {
  // Negligible means below kSplitFactor * eps * ||B||. Zeroing such an entry
  // moves each singular value by at most that much, well under the default
  // rank tolerance, and lets clusters of noise-level values deflate.
  const double eps = kSplitFactor * std::numeric_limits<double>::epsilon();
  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(w[i]) + std::abs(rv1[i]));

  for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(n) - 1; k >= 0; --k) {
    for (int its = 0;; ++its) {
      bool cancel = true;
      std::ptrdiff_t l = k;
      std::ptrdiff_t nm = 0;
      for (; l >= 0; --l) {
        nm = l - 1;
        if (l == 0 || std::abs(rv1[l]) <= eps * anorm) {
          cancel = false;
          break;
        }
        if (std::abs(w[nm]) <= eps * anorm) break;
      }
      if (cancel) {
        double c = 0.0;
        double s = 1.0;
        for (std::ptrdiff_t i = l; i <= k; ++i) {
          const double f = s * rv1[i];
          rv1[i] = c * rv1[i];
          if (std::abs(f) <= eps * anorm) break;
          const double g = w[i];
          const double h = std::hypot(f, g);
          w[i] = h;
          c = g / h;
          s = -f / h;
          if (ut) rotate(ut + nm * m, ut + i * m, m, c, s);
        }
      }
      const double z = w[k];
      if (l == k) {
        if (z < 0.0) {
          w[k] = -z;
          if (vt)
            for (std::size_t j = 0; j < n; ++j) vt[k * n + j] = -vt[k * n + j];
        }
        break;
      }
      if (its >= kMaxSweepsPerValue)
        throw NumericalError("svd: no convergence for " + std::to_string(m) + "x" +
                             std::to_string(n) + " matrix");
      double x = w[l];
      nm = k - 1;
      double y = w[nm];
      double g = rv1[nm];
      double h = rv1[k];
      double f = ((y - z) * (y + z) + (g - h) * (g + h)) / (2.0 * h * y);
      g = std::hypot(f, 1.0);
      f = ((x - z) * (x + z) + h * ((y / (f + std::copysign(g, f))) - h)) / x;
      double c = 1.0;
      double s = 1.0;
      for (std::ptrdiff_t j = l; j <= nm; ++j) {
        const std::ptrdiff_t i = j + 1;
        g = rv1[i];
        y = w[i];
        h = s * g;
        g = c * g;
        double zz = std::hypot(f, h);
        rv1[j] = zz;
        c = f / zz;
        s = h / zz;
        f = x * c + g * s;
        g = g * c - x * s;
        h = y * s;
        y *= c;
        if (vt) rotate(vt + j * n, vt + i * n, n, c, s);
        zz = std::hypot(f, h);
        w[j] = zz;
        if (zz != 0.0) {
          c = f / zz;
          s = h / zz;
        }
        f = c * g + s * y;
        x = c * y - s * g;
        if (ut) rotate(ut + j * m, ut + i * m, m, c, s);
      }
      rv1[l] = 0.0;
      rv1[k] = f;
      w[k] = x;
    }
  }
}

struct Decomposition {
  std::vector<double> sigma;
  std::vector<double> ut;  // n x m
  std::vector<double> vt;  // n x n
};

// Requires m >= n. Row-major input of size m x n.
Decomposition decompose(std::vector<double> a, std::size_t m, std::size_t n, bool vectors) {
  Bidiagonal b;
  b.m = m;
  b.n = n;
  b.a = std::move(a);
  bidiagonalize(b);
  Decomposition out;
  if (vectors) {
    out.ut = accumulate_left(b);
    out.vt = accumulate_right(b);
  }
  b.a.clear();
  b.a.shrink_to_fit();
  diagonalize(b.d, b.e, m, n, vectors ? out.ut.data() : nullptr,
              vectors ? out.vt.data() : nullptr);
  out.sigma = std::move(b.d);
  return out;
}

void check_finite(const Matrix& a) {
  for (double x : a.data())
    if (!std::isfinite(x)) throw InvalidArgument("svd: matrix has non-finite entries");
}

}  // namespace

SvdResult svd(const Matrix& a) {
  check_finite(a);
  const bool tall = a.rows() >= a.cols();
  const Matrix& work = a;
  const std::size_t m = tall ? a.rows() : a.cols();
  const std::size_t n = tall ? a.cols() : a.rows();
  SvdResult out;
  if (n == 0) {
    out.u = Matrix(a.rows(), 0);
    out.vt = Matrix(0, a.cols());
    return out;
  }
  // Row-major storage of a^T is the column-major stacking of a.
  std::vector<double> buf =
      tall ? std::vector<double>(work.data().begin(), work.data().end()) : a.vec();
  Decomposition dec = decompose(std::move(buf), m, n, true);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return dec.sigma[x] > dec.sigma[y]; });

  // Left factor of the tall problem is m x n; right factor is n x n.
  Matrix left(m, n);
  Matrix right_t(n, n);
  out.singular_values.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.singular_values[c] = dec.sigma[src];
    for (std::size_t i = 0; i < m; ++i) left(i, c) = dec.ut[src * m + i];
    for (std::size_t j = 0; j < n; ++j) right_t(c, j) = dec.vt[src * n + j];
  }
  if (tall) {
    out.u = std::move(left);
    out.vt = std::move(right_t);
  } else {
    // a^T = left * S * right_t  =>  a = right_t^T * S * left^T
    out.u = right_t.transpose();
    out.vt = left.transpose();
  }
  return out;
}

std::vector<double> singular_values(const Matrix& a) {
  check_finite(a);
  const bool tall = a.rows() >= a.cols();
  const std::size_t m = tall ? a.rows() : a.cols();
  const std::size_t n = tall ? a.cols() : a.rows();
  if (n == 0) return {};
  std::vector<double> buf =
      tall ? std::vector<double>(a.data().begin(), a.data().end()) : a.vec();
  Decomposition dec = decompose(std::move(buf), m, n, false);
  std::sort(dec.sigma.begin(), dec.sigma.end(), std::greater<>());
  return dec.sigma;
}

}  // namespace lrmc
