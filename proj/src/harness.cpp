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

#include "lrmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "lrmc/error.hpp"
#include "lrmc/geometry.hpp"
#include "lrmc/random.hpp"

namespace lrmc {
namespace {

constexpr std::uint64_t kTruthStream = 0;
constexpr std::uint64_t kPatternStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::string number_label(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

double mse(const Matrix& a, const Matrix& b) {
  const double f = (a - b).frobenius_norm();
  return f * f / static_cast<double>(a.size());
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void InstanceSpec::validate() const {
  if (n1 < 2 || n2 < 2) throw InvalidArgument("instance: dimensions must be at least 2");
  if (r_true < 1 || r_true > std::min(n1, n2))
    throw InvalidArgument("instance: r_true must lie in [1, min(n1, n2)]");
  if (p.has_value() == m.has_value())
    throw InvalidArgument("instance: give exactly one of sampling probability p and cardinality m");
  if (p && !(*p > 0.0 && *p <= 1.0)) throw InvalidArgument("instance: p must lie in (0, 1]");
  if (m && (*m < 1 || *m > static_cast<long long>(n1) * n2))
    throw InvalidArgument("instance: m must lie in [1, n1 n2]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("instance: sigma must be >= 0");
  if (sample_size < 1) throw InvalidArgument("instance: sample size must be positive");
  if (!(signal_scale > 0.0)) throw InvalidArgument("instance: signal scale must be positive");
  if (drift && (drift->rows() != static_cast<std::size_t>(n1) ||
                drift->cols() != static_cast<std::size_t>(n2)))
    throw InvalidArgument("instance: drift must be n1 x n2");
}

NoiseModel InstanceSpec::noise_model() const {
  if (!(sigma > 0.0)) throw InvalidArgument("instance: noise model needs sigma > 0");
  return NoiseModel{sample_size, {sigma}, {}};
}

Instance gen_truth(const InstanceSpec& spec) {
  spec.validate();
  auto rng = make_rng(spec.seed, kTruthStream);
  Instance inst;
  inst.v = orthonormalize(gaussian_matrix(spec.n1, spec.r_true, rng));
  inst.w = orthonormalize(gaussian_matrix(spec.n2, spec.r_true, rng));
  std::uniform_real_distribution<double> unit(1.0, 2.0);
  inst.d.resize(spec.r_true);
  for (double& x : inst.d) x = spec.signal_scale * unit(rng);
  Matrix vd = inst.v;
  for (std::size_t i = 0; i < vd.rows(); ++i)
    for (int c = 0; c < spec.r_true; ++c) vd(i, c) *= inst.d[c];
  inst.y_star = vd * inst.w.transpose();
  return inst;
}

ObservationPattern sample_pattern(const InstanceSpec& spec, std::mt19937_64& rng) {
  const int n1 = spec.n1;
  const int n2 = spec.n2;
  std::vector<Index> entries;
  if (spec.p) {
    std::bernoulli_distribution coin(*spec.p);
    while (entries.empty()) {
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
          if (coin(rng)) entries.push_back({i, j});
    }
  } else {
    std::vector<int> cells(static_cast<std::size_t>(n1) * n2);
    std::iota(cells.begin(), cells.end(), 0);
    const auto m = static_cast<std::size_t>(*spec.m);
    // Partial Fisher-Yates.
    for (std::size_t k = 0; k < m; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, cells.size() - 1);
      std::swap(cells[k], cells[pick(rng)]);
      entries.push_back({cells[k] / n2, cells[k] % n2});
    }
  }
  return ObservationPattern(n1, n2, std::move(entries));
}

ObservedMatrix observe(const Matrix& y_star, const ObservationPattern& p, const InstanceSpec& spec,
                       std::mt19937_64& rng) {
  const double root_n = std::sqrt(static_cast<double>(spec.sample_size));
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> vals;
  vals.reserve(p.m());
  for (const auto& [i, j] : p.entries()) {
    double x = y_star(i, j);
    if (spec.drift) x += (*spec.drift)(i, j) / root_n;
    if (spec.sigma > 0.0) x += spec.sigma / root_n * noise(rng);
    vals.push_back(x);
  }
  return ObservedMatrix(p, std::move(vals));
}

Instance gen_instance(const InstanceSpec& spec) {
  Instance inst = gen_truth(spec);
  auto prng = make_rng(spec.seed, kPatternStream);
  ObservationPattern p = sample_pattern(spec, prng);
  const auto red = is_reducible(p);
  inst.has_empty_line = !red.empty_rows.empty() || !red.empty_cols.empty();
  auto nrng = make_rng(spec.seed, kNoiseStream);
  inst.m = observe(inst.y_star, p, spec, nrng);
  return inst;
}

ObservationPattern sample_wellposed_pattern(const InstanceSpec& spec, const Matrix& y_star, int r,
                                            std::mt19937_64& rng, int max_draws) {
  for (int draw = 0; draw < max_draws; ++draw) {
    ObservationPattern p = sample_pattern(spec, rng);
    if (wellposedness_check(y_star, r, p).well_posed) return p;
  }
  throw NumericalError("no well-posed pattern found in " + std::to_string(max_draws) + " draws");
}

ExperimentResult wellposed_probability(int n1, int n2, const std::vector<int>& r_list,
                                       const std::vector<double>& p_list, int reps,
                                       std::uint64_t seed) {
  if (reps < 1) throw InvalidArgument("experiment: reps must be positive");
  ExperimentResult out;
  out.name = "wellposed_probability";
  out.axes = {"r", "p"};
  out.columns = {"fraction_wellposed", "estimated_bound"};
  out.replications = reps;
  out.seed = seed;
  out.seed_rule = "derive_seed(seed, (cell * reps + rep)); cells ordered r-major then p";
  out.parameters = {{"n1", n1}, {"n2", n2}, {"rank_tol", kDefaultRankTol}};
  std::uint64_t cell = 0;
  for (int r : r_list) {
    for (double p : p_list) {
      int ok = 0;
      for (int rep = 0; rep < reps; ++rep) {
        InstanceSpec spec;
        spec.n1 = n1;
        spec.n2 = n2;
        spec.r_true = r;
        spec.p = p;
        spec.seed = derive_seed(seed, cell * reps + rep);
        const Instance truth = gen_truth(spec);
        auto prng = make_rng(spec.seed, kPatternStream);
        const ObservationPattern pat = sample_pattern(spec, prng);
        if (wellposedness_check(truth.y_star, r, pat).well_posed) ++ok;
      }
      out.grid.push_back({static_cast<double>(r), p});
      out.values.push_back({static_cast<double>(ok) / reps, estimated_bound(n1, n2, p)});
      ++cell;
    }
  }
  return out;
}

ExperimentResult mse_compare(int n1, int n2, const std::vector<int>& r_list,
                             const std::vector<double>& p_list, const NoiseSettings& noise,
                             int reps, std::uint64_t seed) {
  if (reps < 1) throw InvalidArgument("experiment: reps must be positive");
  ExperimentResult out;
  out.name = "mse_compare";
  out.axes = {"r", "p"};
  out.columns = {"mse_lrma", "mse_nuclear", "mse_difference", "estimated_bound"};
  out.replications = reps;
  out.seed = seed;
  out.seed_rule = "derive_seed(seed, (cell * reps + rep)); cells ordered r-major then p";
  const SolverConfig lcfg;
  const NuclearConfig ncfg;
  out.parameters = {{"n1", n1},
                    {"n2", n2},
                    {"sigma", noise.sigma},
                    {"sample_size", noise.sample_size},
                    {"signal_scale", noise.signal_scale},
                    {"lrma_tol", lcfg.tol},
                    {"lrma_max_iter", lcfg.max_iter},
                    {"nuclear_tol", ncfg.tol},
                    {"nuclear_max_iter", ncfg.max_iter}};
  std::uint64_t cell = 0;
  for (int r : r_list) {
    for (double p : p_list) {
      double lrma = 0.0;
      double nuc = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        InstanceSpec spec;
        spec.n1 = n1;
        spec.n2 = n2;
        spec.r_true = r;
        spec.p = p;
        spec.sigma = noise.sigma;
        spec.sample_size = noise.sample_size;
        spec.signal_scale = noise.signal_scale;
        spec.seed = derive_seed(seed, cell * reps + rep);
        const Instance inst = gen_instance(spec);
        lrma += mse(lrma_fixed_rank(inst.m, r, lcfg).y_hat, inst.y_star);
        nuc += mse(nuclear_norm_complete(inst.m, ncfg).y_hat, inst.y_star);
      }
      lrma /= reps;
      nuc /= reps;
      out.grid.push_back({static_cast<double>(r), p});
      out.values.push_back({lrma, nuc, lrma - nuc, estimated_bound(n1, n2, p)});
      ++cell;
    }
  }
  return out;
}

ExperimentResult qq_data(const InstanceSpec& spec, int r, int reps, const QqOptions& opt) {
  if (reps < 1) throw InvalidArgument("experiment: reps must be positive");
  const NoiseModel noise = spec.noise_model();
  const Instance truth = gen_truth(spec);
  auto prng = make_rng(spec.seed, kPatternStream);
  ObservationPattern big = sample_wellposed_pattern(spec, truth.y_star, r, prng);
  std::optional<ObservationPattern> sub;
  if (opt.nested_extra) {
    const int extra = *opt.nested_extra;
    if (extra < 1 || static_cast<std::size_t>(extra) >= big.m())
      throw InvalidArgument("qq: nested difference must lie in [1, m)");
    for (int draw = 0; draw < 100 && !sub; ++draw) {
      if (draw > 0) big = sample_wellposed_pattern(spec, truth.y_star, r, prng);
      std::vector<Index> keep = big.entries();
      for (int k = 0; k < extra; ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, keep.size() - 1);
        keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(pick(prng)));
      }
      ObservationPattern cand(spec.n1, spec.n2, std::move(keep));
      if (wellposedness_check(truth.y_star, r, cand).well_posed) sub = std::move(cand);
    }
    if (!sub) throw NumericalError("qq: no well-posed nested pair found in 100 draws");
  }
  const long long df = opt.nested_extra
                           ? static_cast<long long>(*opt.nested_extra)
                           : degrees_of_freedom(r, spec.n1, spec.n2, static_cast<long long>(big.m()));
  if (df <= 0) throw InvalidArgument("qq: degrees of freedom must be positive");

  std::vector<double> stat(reps);
  std::vector<double> t_big(reps);
  std::vector<double> t_sub(reps);
  for (int rep = 0; rep < reps; ++rep) {
    auto nrng = make_rng(derive_seed(spec.seed, static_cast<std::uint64_t>(rep)), kNoiseStream);
    const ObservedMatrix m = observe(truth.y_star, big, spec, nrng);
    if (sub) {
      const NestedTestResult nt = nested_test(m, *sub, r, noise, opt.solver);
      stat[rep] = nt.delta_t;
      t_big[rep] = nt.t_big;
      t_sub[rep] = nt.t_sub;
    } else {
      stat[rep] = test_statistic(m, r, noise, opt.solver).value;
    }
  }
  std::vector<double> sorted = stat;
  std::sort(sorted.begin(), sorted.end());

  ExperimentResult out;
  out.name = sub ? "qq_nested" : "qq";
  out.axes = {"k"};
  out.columns = sub ? std::vector<std::string>{"chi2_quantile", "delta_t_sorted", "delta_t",
                                               "t_big", "t_sub"}
                    : std::vector<std::string>{"chi2_quantile", "t_sorted", "t"};
  out.replications = reps;
  out.seed = spec.seed;
  out.seed_rule = "truth (seed, 0); pattern (seed, 1); noise of rep k (derive_seed(seed, k), 2)";
  const int dfi = static_cast<int>(df);
  for (int k = 0; k < reps; ++k) {
    const double q = chi2_quantile((k + 0.5) / reps, dfi);
    out.grid.push_back({static_cast<double>(k + 1)});
    if (sub)
      out.values.push_back({q, sorted[k], stat[k], t_big[k], t_sub[k]});
    else
      out.values.push_back({q, sorted[k], stat[k]});
  }
  const KsResult ks = ks_test(stat, [dfi](double x) { return x <= 0.0 ? 0.0 : chi2_cdf(x, dfi); });
  const double mean = std::accumulate(stat.begin(), stat.end(), 0.0) / reps;
  out.parameters = {{"n1", spec.n1},
                    {"n2", spec.n2},
                    {"r", r},
                    {"m", static_cast<double>(big.m())},
                    {"df", static_cast<double>(df)},
                    {"sigma", spec.sigma},
                    {"sample_size", spec.sample_size},
                    {"signal_scale", spec.signal_scale},
                    {"solver_tol", opt.solver.tol},
                    {"solver_max_iter", opt.solver.max_iter},
                    {"ks_statistic", ks.statistic},
                    {"ks_p_value", ks.p_value},
                    {"mean", mean}};
  if (sub) {
    out.parameters["m_sub"] = static_cast<double>(sub->m());
    out.parameters["corr_delta_t_t_sub"] = reps >= 2 ? correlation(stat, t_sub) : 0.0;
  }
  return out;
}

ExperimentResult rank_selection_compare(int n1, int n2, const std::vector<int>& r_list,
                                        const SamplingRule& sampling, const NoiseSettings& noise,
                                        int reps, const std::vector<double>& thresholds,
                                        std::uint64_t seed) {
  if (reps < 1) throw InvalidArgument("experiment: reps must be positive");
  if (!(noise.sigma > 0.0)) throw InvalidArgument("rank selection: sigma must be positive");
  ExperimentResult out;
  out.name = "rank_selection_compare";
  out.axes = {"r_true"};
  out.columns = {"sequential_median_abs_error"};
  for (double b : thresholds) out.columns.push_back("threshold_" + number_label(b) + "_median_abs_error");
  out.replications = reps;
  out.seed = seed;
  out.seed_rule = "derive_seed(seed, (cell * reps + rep)); cells ordered by r_true";
  SolverConfig scfg;
  scfg.max_iter = 3000;
  out.parameters = {{"n1", n1},
                    {"n2", n2},
                    {"alpha", 0.05},
                    {"sigma", noise.sigma},
                    {"sample_size", noise.sample_size},
                    {"signal_scale", noise.signal_scale},
                    {"solver_tol", scfg.tol},
                    {"solver_max_iter", scfg.max_iter}};
  std::uint64_t cell = 0;
  for (int r : r_list) {
    std::vector<double> seq_err;
    std::vector<std::vector<double>> thr_err(thresholds.size());
    for (int rep = 0; rep < reps; ++rep) {
      InstanceSpec spec;
      spec.n1 = n1;
      spec.n2 = n2;
      spec.r_true = r;
      spec.p = sampling.p;
      spec.m = sampling.m;
      spec.sigma = noise.sigma;
      spec.sample_size = noise.sample_size;
      spec.signal_scale = noise.signal_scale;
      spec.seed = derive_seed(seed, cell * reps + rep);
      const Instance inst = gen_instance(spec);
      const RankTestReport rep_t =
          sequential_rank_test(inst.m, spec.noise_model(), 0.05, scfg, RankScan{{}, true});
      const int r_hat = rep_t.selected_rank.value_or(rep_t.r_max);
      seq_err.push_back(std::abs(r_hat - r));
      const SolveResult nuc = nuclear_norm_complete(inst.m);
      const auto sv = singular_values(nuc.y_hat);
      for (std::size_t t = 0; t < thresholds.size(); ++t)
        thr_err[t].push_back(std::abs(rank_from_singular_values(sv, thresholds[t]) - r));
    }
    std::vector<double> row{median(seq_err)};
    for (auto& e : thr_err) row.push_back(median(e));
    out.grid.push_back({static_cast<double>(r)});
    out.values.push_back(std::move(row));
    ++cell;
  }
  return out;
}

namespace {

constexpr double kWilsonOff[6][6] = {{0, 0.56, 0.16, 0.48, 0.24, 0.64},
                                     {0.56, 0, 0.20, 0.66, 0.51, 0.86},
                                     {0.16, 0.20, 0, 0.18, 0.07, 0.23},
                                     {0.48, 0.66, 0.18, 0, 0.30, 0.72},
                                     {0.24, 0.51, 0.07, 0.30, 0, 0.41},
                                     {0.64, 0.86, 0.23, 0.72, 0.41, 0}};

// Gauss-Newton on Y = V W^T fitting the observed entries, started from the
// rank-r truncation of y0. Steps are minimum norm (factor gauge is free).
Matrix refine_rank(const ObservedMatrix& m, const Matrix& y0, int r) {
  const int n1 = m.n1();
  const int n2 = m.n2();
  const auto& e = m.pattern().entries();
  const SvdResult s0 = svd(y0);
  Matrix v(n1, r);
  Matrix w(n2, r);
  for (int c = 0; c < r; ++c) {
    const double sq = std::sqrt(s0.singular_values[c]);
    for (int i = 0; i < n1; ++i) v(i, c) = s0.u(i, c) * sq;
    for (int j = 0; j < n2; ++j) w(j, c) = s0.vt(c, j) * sq;
  }
  const std::size_t np = static_cast<std::size_t>(n1 + n2) * r;
  for (int it = 0; it < 50; ++it) {
    const Matrix y = v * w.transpose();
    Matrix jac(e.size(), np);
    std::vector<double> res(e.size());
    double rn = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const auto [i, j] = e[k];
      res[k] = y(i, j) - m.values()[k];
      rn += res[k] * res[k];
      for (int c = 0; c < r; ++c) {
        jac(k, static_cast<std::size_t>(i) * r + c) = w(j, c);
        jac(k, static_cast<std::size_t>(n1 + j) * r + c) = v(i, c);
      }
    }
    if (std::sqrt(rn) < 1e-15) break;
    const SvdResult sj = svd(jac);
    const double cut = 1e-10 * sj.singular_values.front();
    std::vector<double> step(np, 0.0);
    for (std::size_t c = 0; c < sj.singular_values.size(); ++c) {
      if (sj.singular_values[c] <= cut) continue;
      double t = 0.0;
      for (std::size_t k = 0; k < e.size(); ++k) t += sj.u(k, c) * res[k];
      t /= sj.singular_values[c];
      for (std::size_t q = 0; q < np; ++q) step[q] -= sj.vt(c, q) * t;
    }
    for (int i = 0; i < n1; ++i)
      for (int c = 0; c < r; ++c) v(i, c) += step[static_cast<std::size_t>(i) * r + c];
    for (int j = 0; j < n2; ++j)
      for (int c = 0; c < r; ++c) w(j, c) += step[static_cast<std::size_t>(n1 + j) * r + c];
  }
  return v * w.transpose();
}

}  // namespace

WilsonFixture wilson_fixture() {
  std::vector<Index> entries;
  std::vector<double> vals;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) {
        entries.push_back({i, j});
        vals.push_back(kWilsonOff[i][j]);
      }
  WilsonFixture fx;
  fx.m = ObservedMatrix(ObservationPattern(6, 6, std::move(entries)), std::move(vals));
  fx.printed_diag1 = {0.64, 0.85, 0.06, 0.56, 0.50, 0.93};
  fx.printed_diag2 = {0.42, 0.90, 0.06, 0.55, 0.39, 1.00};
  fx.completion1 = fx.m.zero_filled();
  Matrix start2 = fx.m.zero_filled();
  for (int i = 0; i < 6; ++i) {
    fx.completion1(i, i) = fx.printed_diag1[i];
    start2(i, i) = fx.printed_diag2[i];
  }
  const Matrix refined = refine_rank(fx.m, start2, 3);
  // Keep the observed entries verbatim; take only the diagonal from the fit.
  fx.completion2 = fx.m.zero_filled();
  for (int i = 0; i < 6; ++i) fx.completion2(i, i) = refined(i, i);
  return fx;
}

}  // namespace lrmc
