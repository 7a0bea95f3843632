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

#include "lrmc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "lrmc/error.hpp"
#include "lrmc/geometry.hpp"

namespace lrmc {
namespace {

void check_df(int df) {
  if (df < 1) throw InvalidArgument("chi-square: df must be positive, got " + std::to_string(df));
}

// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_tail(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

double chi2_cdf(double x, int df) {
  check_df(df);
  if (!(x >= 0.0)) throw InvalidArgument("chi-square: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, int df) {
  check_df(df);
  if (!(x >= 0.0)) throw InvalidArgument("chi-square: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile(double p, int df) {
  check_df(df);
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("chi-square quantile: p must lie in [0, 1)");
  if (p == 0.0) return 0.0;
  return 2.0 * boost::math::gamma_p_inv(0.5 * df, p);
}

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw InvalidArgument("ks test: empty sample");
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d)};
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw InvalidArgument("correlation: need two samples of equal length >= 2");
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

long long degrees_of_freedom(int r, int n1, int n2, long long m) {
  if (r < 0) throw InvalidArgument("degrees of freedom: negative rank");
  return m - static_cast<long long>(r) * (static_cast<long long>(n1) + n2 - r);
}

void NoiseModel::validate(std::size_t m) const {
  if (n < 1) throw InvalidArgument("noise: sample size N must be positive");
  if (sigma.size() != 1 && sigma.size() != m)
    throw InvalidArgument("noise: sigma must be a scalar or one value per observed entry");
  for (double s : sigma)
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("noise: sigma must be positive");
  if (!drift.empty() && drift.size() != m)
    throw InvalidArgument("noise: drift must be empty or one value per observed entry");
}

std::vector<double> NoiseModel::weights(std::size_t m) const {
  validate(m);
  std::vector<double> w(m);
  for (std::size_t k = 0; k < m; ++k) w[k] = 1.0 / (sigma_at(k) * sigma_at(k));
  return w;
}

NoiseModel NoiseModel::restrict(const ObservationPattern& full,
                                const ObservationPattern& sub) const {
  validate(full.m());
  if (!sub.is_subset_of(full)) throw InvalidArgument("noise: sub-pattern is not contained in the pattern");
  NoiseModel out{n, {}, {}};
  if (sigma.size() == 1) out.sigma = sigma;
  for (const auto& [i, j] : sub.entries()) {
    const auto k = static_cast<std::size_t>(full.position(i, j));
    if (sigma.size() != 1) out.sigma.push_back(sigma[k]);
    if (!drift.empty()) out.drift.push_back(drift[k]);
  }
  return out;
}

TestStatistic test_statistic(const ObservedMatrix& m, int r, const NoiseModel& noise,
                             const SolverConfig& cfg) {
  const std::size_t count = m.pattern().m();
  noise.validate(count);
  TestStatistic ts;
  ts.df = degrees_of_freedom(r, m.n1(), m.n2(), static_cast<long long>(count));
  if (ts.df <= 0)
    throw InvalidArgument("test statistic: model is saturated at rank " + std::to_string(r) +
                          " (df = " + std::to_string(ts.df) + ")");
  SolverConfig c = cfg;
  c.weights = noise.sigma.size() == 1 ? std::vector<double>{} : noise.weights(count);
  const SolveResult fit = lrma_fixed_rank(m, r, c);
  const double scale = noise.sigma.size() == 1 ? 1.0 / (noise.sigma[0] * noise.sigma[0]) : 1.0;
  ts.value = static_cast<double>(noise.n) * scale * fit.fit;
  ts.converged = fit.converged;
  ts.iterations = fit.iterations;
  return ts;
}

RankTestReport sequential_rank_test(const ObservedMatrix& m, const NoiseModel& noise, double alpha,
                                    const SolverConfig& cfg, const RankScan& scan) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("rank test: alpha must lie in (0, 1)");
  noise.validate(m.pattern().m());
  RankTestReport rep;
  rep.alpha = alpha;
  rep.r_max = scan.r_max ? *scan.r_max : generic_bound(m.pattern()).ceil;
  rep.r_max = std::min(rep.r_max, std::min(m.n1(), m.n2()));
  const auto count = static_cast<long long>(m.pattern().m());
  for (int r = 1; r <= rep.r_max; ++r) {
    if (degrees_of_freedom(r, m.n1(), m.n2(), count) <= 0) break;
    const TestStatistic ts = test_statistic(m, r, noise, cfg);
    RankTestRow row{r, ts.value, ts.df, chi2_sf(ts.value, static_cast<int>(ts.df)), ts.converged};
    rep.rows.push_back(row);
    if (!rep.selected_rank && row.p_value > alpha) {
      rep.selected_rank = r;
      if (scan.stop_on_accept) break;
    }
  }
  return rep;
}

NestedTestResult nested_test(const ObservedMatrix& m_big, const ObservationPattern& sub, int r,
                             const NoiseModel& noise, const SolverConfig& cfg) {
  const ObservedMatrix m_sub = m_big.restrict_to(sub);
  const NoiseModel noise_sub = noise.restrict(m_big.pattern(), sub);
  NestedTestResult res;
  res.delta_df = static_cast<long long>(m_big.pattern().m()) - static_cast<long long>(sub.m());
  if (res.delta_df == 0) return res;
  res.t_big = test_statistic(m_big, r, noise, cfg).value;
  res.t_sub = test_statistic(m_sub, r, noise_sub, cfg).value;
  res.delta_t = res.t_big - res.t_sub;
  return res;
}

double noncentrality(const Matrix& y_star, int r, const ObservationPattern& p,
                     const NoiseModel& noise) {
  noise.validate(p.m());
  std::vector<double> drift(p.m());
  for (std::size_t k = 0; k < p.m(); ++k) drift[k] = noise.drift_at(k);
  const auto w = noise.weights(p.m());
  return project_tangent(drift, y_star, r, p, w).residual;
}

VarianceEstimate estimate_variances(const std::vector<std::vector<double>>& replicates) {
  if (replicates.size() < 2) throw InvalidArgument("variance estimate: need at least two replicates");
  const std::size_t m = replicates.front().size();
  for (const auto& rep : replicates)
    if (rep.size() != m) throw InvalidArgument("variance estimate: replicates differ in length");
  const double n = static_cast<double>(replicates.size());
  VarianceEstimate out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  for (const auto& rep : replicates)
    for (std::size_t k = 0; k < m; ++k) out.mean[k] += rep[k];
  for (double& x : out.mean) x /= n;
  for (const auto& rep : replicates)
    for (std::size_t k = 0; k < m; ++k) {
      const double d = rep[k] - out.mean[k];
      out.variance[k] += d * d;
    }
  for (double& x : out.variance) x /= n - 1.0;
  return out;
}

TangentApproximation tangent_approximation(const ObservedMatrix& m, const Matrix& y_star, int r,
                                           std::span<const double> weights,
                                           const SolverConfig& cfg) {
  const auto& e = m.pattern().entries();
  std::vector<double> resid(e.size());
  for (std::size_t k = 0; k < e.size(); ++k)
    resid[k] = m.values()[k] - y_star(e[k].row, e[k].col);
  TangentApproximation out;
  out.tangent_min = project_tangent(resid, y_star, r, m.pattern(), weights).residual;
  SolverConfig c = cfg;
  c.weights.assign(weights.begin(), weights.end());
  out.solver_min = lrma_fixed_rank(m, r, c).fit;
  out.gap = std::abs(out.solver_min - out.tangent_min);
  return out;
}

}  // namespace lrmc
