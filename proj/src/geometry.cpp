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

#include "lrmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lrmc/error.hpp"
#include "lrmc/random.hpp"

namespace lrmc {
namespace {

void check_shape(const Matrix& y, const ObservationPattern& p) {
  if (y.rows() != static_cast<std::size_t>(p.n1()) || y.cols() != static_cast<std::size_t>(p.n2()))
    throw InvalidArgument("matrix is " + std::to_string(y.rows()) + "x" +
                          std::to_string(y.cols()) + " but pattern is " + std::to_string(p.n1()) +
                          "x" + std::to_string(p.n2()));
}

// Full orthogonal frames [U_r U_perp] and [V_r V_perp] adapted to Y.
struct Frames {
  Matrix u;  // n1 x n1
  Matrix v;  // n2 x n2
  int r = 0;
};

Frames adapted_frames(const Matrix& y, int r, double rel_tol) {
  const int kmax = static_cast<int>(std::min(y.rows(), y.cols()));
  if (r < 0 || r > kmax)
    throw InvalidArgument("rank " + std::to_string(r) + " outside [0, " + std::to_string(kmax) +
                          "]");
  const SvdResult s = svd(y);
  const double s1 = s.singular_values.empty() ? 0.0 : s.singular_values.front();
  const int actual =
      s1 == 0.0 ? 0 : numerical_rank(s.singular_values, y.rows(), y.cols(), rel_tol * s1);
  if (actual != r)
    throw InvalidArgument("requested rank " + std::to_string(r) + " but matrix has numerical rank " +
                          std::to_string(actual) + " at relative tolerance " +
                          std::to_string(rel_tol));
  const std::size_t n1 = y.rows();
  const std::size_t n2 = y.cols();
  Matrix ur(n1, r);
  Matrix vr(n2, r);
  for (int c = 0; c < r; ++c) {
    for (std::size_t i = 0; i < n1; ++i) ur(i, c) = s.u(i, c);
    for (std::size_t j = 0; j < n2; ++j) vr(j, c) = s.vt(c, j);
  }
  const Matrix uperp = orthogonal_complement(ur);
  const Matrix vperp = orthogonal_complement(vr);
  Frames fr{Matrix(n1, n1), Matrix(n2, n2), r};
  for (std::size_t i = 0; i < n1; ++i) {
    for (int c = 0; c < r; ++c) fr.u(i, c) = ur(i, c);
    for (std::size_t c = 0; c < n1 - r; ++c) fr.u(i, r + c) = uperp(i, c);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    for (int c = 0; c < r; ++c) fr.v(j, c) = vr(j, c);
    for (std::size_t c = 0; c < n2 - r; ++c) fr.v(j, r + c) = vperp(j, c);
  }
  return fr;
}

// Tangent basis element (a, b) is u_a v_b^T with a or b among the leading r.
std::vector<std::pair<int, int>> tangent_pairs(int n1, int n2, int r) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(r) * (n1 + n2 - r));
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b)
      if (a < r || b < r) out.emplace_back(a, b);
  return out;
}

}  // namespace

Complements complements(const Matrix& y, int r, double rel_tol) {
  const Frames fr = adapted_frames(y, r, rel_tol);
  const std::size_t n1 = y.rows();
  const std::size_t n2 = y.cols();
  Complements c{Matrix(n1 - r, n1), Matrix(n2, n2 - r)};
  for (std::size_t a = 0; a < n1 - r; ++a)
    for (std::size_t i = 0; i < n1; ++i) c.f(a, i) = fr.u(i, r + a);
  for (std::size_t j = 0; j < n2; ++j)
    for (std::size_t b = 0; b < n2 - r; ++b) c.g(j, b) = fr.v(j, r + b);
  return c;
}

Matrix kron_matrix(const Complements& c, const ObservationPattern& p) {
  const std::size_t fr = c.f.rows();
  const std::size_t gc = c.g.cols();
  const auto holes = p.complement();
  Matrix k(fr * gc, holes.size());
  std::vector<double> fcol(fr);
  for (std::size_t h = 0; h < holes.size(); ++h) {
    const auto [i, j] = holes[h];
    for (std::size_t a = 0; a < fr; ++a) fcol[a] = c.f(a, i);
    const auto col = kron_column(c.g.row(j), fcol);
    for (std::size_t t = 0; t < col.size(); ++t) k(t, h) = col[t];
  }
  return k;
}

WellPosednessReport wellposedness_check(const Matrix& y, int r, const ObservationPattern& p,
                                        double rel_tol) {
  check_shape(y, p);
  WellPosednessReport rep;
  rep.rank = r;
  rep.tol_used = rel_tol;
  rep.required_rank = static_cast<long long>(p.complement_size());
  rep.min_counts_ok = r == 0 || min_count_check(p, r);
  const auto red = is_reducible(p);
  rep.irreducible = !red.reducible;
  const long long n1 = p.n1();
  const long long n2 = p.n2();
  rep.dimension_ok = (n1 - r) * (n2 - r) >= rep.required_rank;

  const Complements c = complements(y, r, rel_tol);
  if (rep.required_rank == 0) {
    rep.rank_of_k = 0;
    rep.well_posed = true;
    return rep;
  }
  if (!rep.dimension_ok) return rep;
  // A reducible pattern, or a line with fewer than r observations, leaves a
  // nonzero tangent direction supported on unobserved cells for every rank-r
  // point, so K is rank deficient without factoring it.
  if (r > 0 && (!rep.min_counts_ok || !rep.irreducible)) return rep;

  const Matrix k = kron_matrix(c, p);
  const auto sv = singular_values(k);
  const double s1 = sv.empty() ? 0.0 : sv.front();
  rep.rank_of_k = s1 == 0.0 ? 0 : numerical_rank(sv, k.rows(), k.cols(), rel_tol * s1);
  if (s1 > 0.0) rep.k_condition = sv.back() / s1;
  rep.well_posed = *rep.rank_of_k == rep.required_rank;
  return rep;
}

TangentBasis tangent_basis(const Matrix& y, int r, double rel_tol) {
  const Frames fr = adapted_frames(y, r, rel_tol);
  const int n1 = static_cast<int>(y.rows());
  const int n2 = static_cast<int>(y.cols());
  TangentBasis tb;
  for (const auto& [a, b] : tangent_pairs(n1, n2, r)) {
    Matrix h(n1, n2);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) h(i, j) = fr.u(i, a) * fr.v(j, b);
    tb.basis.push_back(std::move(h));
  }
  tb.dim = static_cast<long long>(tb.basis.size());
  return tb;
}

TangentProjection project_tangent(std::span<const double> values, const Matrix& y, int r,
                                  const ObservationPattern& p, std::span<const double> weights,
                                  double rel_tol) {
  check_shape(y, p);
  const auto& entries = p.entries();
  if (values.size() != entries.size())
    throw InvalidArgument("project_tangent: expected one value per observed entry");
  if (!weights.empty() && weights.size() != entries.size())
    throw InvalidArgument("project_tangent: expected one weight per observed entry");
  for (double w : weights)
    if (!(w > 0.0)) throw InvalidArgument("project_tangent: weights must be positive");

  const Frames fr = adapted_frames(y, r, rel_tol);
  const auto pairs = tangent_pairs(p.n1(), p.n2(), r);
  const std::size_t m = entries.size();
  if (pairs.size() > m)
    throw NumericalError("project_tangent: tangent space of dimension " +
                         std::to_string(pairs.size()) + " exceeds " + std::to_string(m) +
                         " observations; minimizer is not unique");
  Matrix a(m, pairs.size());
  std::vector<double> rhs(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double sw = weights.empty() ? 1.0 : std::sqrt(weights[k]);
    const auto [i, j] = entries[k];
    for (std::size_t t = 0; t < pairs.size(); ++t)
      a(k, t) = sw * fr.u(i, pairs[t].first) * fr.v(j, pairs[t].second);
    rhs[k] = sw * values[k];
  }
  std::vector<double> coef;
  try {
    coef = solve_least_squares(a, rhs, rel_tol);
  } catch (const NumericalError&) {
    throw NumericalError(
        "project_tangent: observation map is not injective on the tangent space (ill-posed)");
  }

  TangentProjection out{Matrix(p.n1(), p.n2()), 0.0};
  // Assemble H = sum_t c_t u_a v_b^T as U C V^T with C sparse.
  Matrix cmat(p.n1(), p.n2());
  for (std::size_t t = 0; t < pairs.size(); ++t) cmat(pairs[t].first, pairs[t].second) = coef[t];
  out.h = fr.u * cmat * fr.v.transpose();
  for (std::size_t k = 0; k < m; ++k) {
    const double w = weights.empty() ? 1.0 : weights[k];
    const double d = values[k] - out.h(entries[k].row, entries[k].col);
    out.residual += w * d * d;
  }
  return out;
}

Matrix jacobian(const Matrix& v, const Matrix& w, const ObservationPattern& p) {
  const std::size_t n1 = p.n1();
  const std::size_t n2 = p.n2();
  if (v.rows() != n1 || w.rows() != n2 || v.cols() != w.cols())
    throw InvalidArgument("jacobian: factor shapes do not match the pattern");
  const std::size_t r = v.cols();
  const auto holes = p.complement();
  Matrix jac(n1 * r + n2 * r + holes.size(), n1 * n2);
  // d(VW^T)/dV_ia = e_i W_{:,a}^T
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t j = 0; j < n2; ++j) jac(i * r + a, i + j * n1) = w(j, a);
  // d(VW^T)/dW_jb = V_{:,b} e_j^T
  const std::size_t off = n1 * r;
  for (std::size_t j = 0; j < n2; ++j)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t i = 0; i < n1; ++i) jac(off + j * r + b, i + j * n1) = v(i, b);
  const std::size_t xoff = off + n2 * r;
  for (std::size_t h = 0; h < holes.size(); ++h)
    jac(xoff + h, holes[h].row + holes[h].col * n1) = 1.0;
  return jac;
}

CharRankResult characteristic_rank(const ObservationPattern& p, int r, int trials,
                                   std::uint64_t seed, double rel_tol) {
  if (r < 1 || r > std::min(p.n1(), p.n2()))
    throw InvalidArgument("characteristic_rank: rank " + std::to_string(r) + " out of range");
  if (trials < 1) throw InvalidArgument("characteristic_rank: need at least one trial");
  CharRankResult res;
  res.rank = r;
  res.trials = trials;
  res.tol_used = rel_tol;
  res.seed = seed;
  res.f_rm = generic_bound(p).f_rm(r);
  for (int t = 0; t < trials; ++t) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(t));
    const Matrix v = gaussian_matrix(p.n1(), r, rng);
    const Matrix w = gaussian_matrix(p.n2(), r, rng);
    const int rk = relative_rank(jacobian(v, w, p), rel_tol);
    res.ranks_per_trial.push_back(rk);
    res.rho = std::max(res.rho, rk);
  }
  res.generic_well_posed = res.rho == res.f_rm;
  return res;
}

}  // namespace lrmc
