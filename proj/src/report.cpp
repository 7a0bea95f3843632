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

#include "lrmc/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lrmc/error.hpp"
#include "lrmc/io.hpp"
#include "lrmc/random.hpp"

namespace lrmc {
namespace {

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json table(std::vector<std::string> columns, Json rows) {
  return Json{{"columns", std::move(columns)}, {"rows", std::move(rows)}};
}

// Typed access to an options object that remembers which keys were read.
class Options {
 public:
  Options(const Json& j, std::string what) : j_(j), what_(std::move(what)) {
    if (!j_.is_object()) throw InvalidArgument(what_ + ": options must be a JSON object");
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return fallback;
    return convert<T>(key);
  }

  template <class T>
  std::optional<T> maybe(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return std::nullopt;
    return convert<T>(key);
  }

  template <class T>
  T require(const std::string& key) {
    auto v = maybe<T>(key);
    if (!v) throw InvalidArgument(what_ + ": option '" + key + "' is required");
    return *v;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw InvalidArgument(what_ + ": unknown option '" + k + "'");
  }

 private:
  template <class T>
  T convert(const std::string& key) const {
    const Json& v = j_.at(key);
    try {
      if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer())
          throw InvalidArgument(what_ + ": option '" + key + "' must be an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw InvalidArgument(what_ + ": option '" + key + "' must be a number");
      }
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidArgument(what_ + ": option '" + key + "' has the wrong type");
    }
  }

  const Json& j_;
  std::string what_;
  std::set<std::string> seen_;
};

Json matrix_table(const Matrix& a) {
  std::vector<std::string> cols;
  for (std::size_t j = 0; j < a.cols(); ++j) cols.push_back("c" + std::to_string(j + 1));
  return table(cols, to_json(a));
}

Json counts_json(const ObservationPattern& p) {
  const auto c = row_col_counts(p);
  return Json{{"rows", c.rows}, {"cols", c.cols}};
}

Json reducibility_json(const ObservationPattern& p) {
  const auto red = is_reducible(p);
  Json groups = Json::array();
  for (std::size_t c = 0; c < red.components.size(); ++c) {
    std::vector<int> rows;
    std::vector<int> cols;
    for (int i : red.row_groups[c]) rows.push_back(i + 1);
    for (int j : red.col_groups[c]) cols.push_back(j + 1);
    groups.push_back(Json{{"entries", red.components[c].size()}, {"rows", rows}, {"cols", cols}});
  }
  std::vector<int> er;
  std::vector<int> ec;
  for (int i : red.empty_rows) er.push_back(i + 1);
  for (int j : red.empty_cols) ec.push_back(j + 1);
  return Json{{"reducible", red.reducible},
              {"component_count", red.components.size()},
              {"components", groups},
              {"empty_rows", er},
              {"empty_cols", ec}};
}

Json bounds_json(const GenericBounds& b) {
  return Json{{"n1", b.n1}, {"n2", b.n2}, {"m", b.m}, {"value", b.value}, {"ceil", b.ceil}};
}

Json solver_config_json(const SolverConfig& c) {
  return Json{{"tol", c.tol},
              {"max_iter", c.max_iter},
              {"init", c.init == Init::kRandom ? "random" : "zero"},
              {"seed", c.seed},
              {"weighted", !c.weights.empty()}};
}

Json nuclear_config_json(const NuclearConfig& c) {
  return Json{{"method", c.method == NuclearMethod::kAdmm ? "admm" : "svt"},
              {"tol", c.tol},
              {"max_iter", c.max_iter},
              {"tau", c.tau},
              {"delta", c.delta},
              {"rho", c.rho}};
}

Json solve_json(const SolveResult& r) {
  return Json{{"fit", num(r.fit)},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"optimality_residuals", {num(r.optimality_residuals.first),
                                        num(r.optimality_residuals.second)}}};
}

std::vector<int> int_list(Options& o, const std::string& key, std::vector<int> fallback) {
  return o.get<std::vector<int>>(key, std::move(fallback));
}

std::vector<double> real_list(Options& o, const std::string& key, std::vector<double> fallback) {
  return o.get<std::vector<double>>(key, std::move(fallback));
}

}  // namespace

Json to_json(const Matrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(num(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const WellPosednessReport& r) {
  return Json{{"rank", r.rank},
              {"rank_of_k", r.rank_of_k ? Json(*r.rank_of_k) : Json(nullptr)},
              {"required_rank", r.required_rank},
              {"well_posed", r.well_posed},
              {"dimension_ok", r.dimension_ok},
              {"min_counts_ok", r.min_counts_ok},
              {"irreducible", r.irreducible},
              {"tol_used", r.tol_used},
              {"k_condition_inverse", r.k_condition ? num(*r.k_condition) : Json(nullptr)}};
}

Json to_json(const CharRankResult& r) {
  return Json{{"rank", r.rank},
              {"rho", r.rho},
              {"f_rm", r.f_rm},
              {"trials", r.trials},
              {"ranks_per_trial", r.ranks_per_trial},
              {"generic_well_posed", r.generic_well_posed},
              {"rank_stable", std::all_of(r.ranks_per_trial.begin(), r.ranks_per_trial.end(),
                                          [&](int x) { return x == r.rho; })},
              {"tol_used", r.tol_used},
              {"seed", r.seed}};
}

Json to_json(const RankTestReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({row.r, num(row.t_n), row.df, num(row.p_value), row.converged});
  return Json{{"alpha", r.alpha},
              {"r_max", r.r_max},
              {"selected_rank", r.selected_rank ? Json(*r.selected_rank) : Json(nullptr)},
              {"table", table({"r", "t_n", "df", "p_value", "converged"}, rows)}};
}

Json to_json(const ExperimentResult& r) {
  std::vector<std::string> cols = r.axes;
  cols.insert(cols.end(), r.columns.begin(), r.columns.end());
  Json rows = Json::array();
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    Json row = Json::array();
    for (double x : r.grid[k]) row.push_back(num(x));
    for (double x : r.values[k]) row.push_back(num(x));
    rows.push_back(std::move(row));
  }
  Json params = Json::object();
  for (const auto& [k, v] : r.parameters) params[k] = num(v);
  return Json{{"name", r.name},
              {"replications", r.replications},
              {"seed", r.seed},
              {"seed_rule", r.seed_rule},
              {"parameters", params},
              {"table", table(cols, rows)}};
}

Json analyze_report(const ObservationPattern& p, const Json& options) {
  Options o(options, "analyze");
  const int kmax = std::min(p.n1(), p.n2());
  const int rank_max = std::clamp(o.get<int>("rank_max", kmax), 1, kmax);
  o.finish();
  const GenericBounds b = generic_bound(p);
  const double frac = static_cast<double>(p.m()) / (static_cast<double>(p.n1()) * p.n2());
  Json rows = Json::array();
  for (int r = 1; r <= rank_max; ++r) {
    const long long df = degrees_of_freedom(r, p.n1(), p.n2(), static_cast<long long>(p.m()));
    rows.push_back({r, b.manifold_dim(r), b.f_rm(r), df, min_count_check(p, r),
                    static_cast<long long>(p.n1() - r) * (p.n2() - r) >=
                        static_cast<long long>(p.complement_size())});
  }
  return Json{{"command", "analyze"},
              {"config", {{"rank_max", rank_max}}},
              {"n1", p.n1()},
              {"n2", p.n2()},
              {"m", p.m()},
              {"counts", counts_json(p)},
              {"reducibility", reducibility_json(p)},
              {"generic_bound", bounds_json(b)},
              {"estimated_bound", estimated_bound(p.n1(), p.n2(), frac)},
              {"observed_fraction", frac},
              {"table", table({"r", "manifold_dim", "f_rm", "df", "min_counts_ok", "dimension_ok"},
                              rows)}};
}

Json certify_report(const ObservationPattern& p, const std::optional<Matrix>& y,
                    const Json& options) {
  Options o(options, "certify");
  const double tol = o.get<double>("tol", kDefaultRankTol);
  const int trials = o.get<int>("trials", 5);
  const auto seed = o.get<std::uint64_t>("seed", 0);
  std::optional<int> rank = o.maybe<int>("rank");
  o.finish();
  if (!(tol > 0.0)) throw InvalidArgument("certify: tol must be positive");

  Matrix point;
  std::string source;
  if (y) {
    point = *y;
    source = "input";
    if (!rank) rank = relative_rank(point, tol);
  } else {
    if (!rank) throw InvalidArgument("certify: 'rank' is required without an input matrix");
    if (*rank < 1 || *rank > std::min(p.n1(), p.n2()))
      throw InvalidArgument("certify: rank out of range");
    // Stream distinct from the characteristic-rank trials.
    auto rng = make_rng(seed, 0x63657274u);
    const Matrix v = gaussian_matrix(p.n1(), *rank, rng);
    const Matrix w = gaussian_matrix(p.n2(), *rank, rng);
    point = v * w.transpose();
    source = "random";
  }
  const WellPosednessReport wp = wellposedness_check(point, *rank, p, tol);
  const CharRankResult cr = characteristic_rank(p, *rank, trials, seed, tol);
  const GenericBounds b = generic_bound(p);
  return Json{{"command", "certify"},
              {"config", {{"rank", *rank}, {"tol", tol}, {"trials", trials}, {"seed", seed},
                          {"point", source}}},
              {"n1", p.n1()},
              {"n2", p.n2()},
              {"m", p.m()},
              {"generic_bound", bounds_json(b)},
              {"wellposedness", to_json(wp)},
              {"characteristic_rank", to_json(cr)},
              {"bound_consistent", !wp.well_posed || *rank <= b.value + 1e-12},
              {"reducibility", reducibility_json(p)}};
}

Json complete_report(const ObservedMatrix& m, const Json& options) {
  Options o(options, "complete");
  const auto method = o.get<std::string>("method", "lrma");
  SolverConfig scfg;
  NuclearConfig ncfg;
  scfg.tol = o.get<double>("tol", scfg.tol);
  scfg.max_iter = o.get<int>("max_iter", scfg.max_iter);
  scfg.seed = o.get<std::uint64_t>("seed", 0);
  const auto init = o.get<std::string>("init", "zero");
  const auto nmethod = o.get<std::string>("nuclear_method", "admm");
  ncfg.tau = o.get<double>("tau", 0.0);
  ncfg.delta = o.get<double>("delta", 0.0);
  ncfg.rho = o.get<double>("rho", 0.0);
  const auto threshold = o.maybe<double>("threshold");
  const auto rank = o.maybe<int>("rank");
  const int budget = o.get<int>("max_subset_search", 2000);
  o.finish();
  if (init != "zero" && init != "random") throw InvalidArgument("complete: init must be zero or random");
  scfg.init = init == "random" ? Init::kRandom : Init::kZeroFill;
  if (nmethod != "admm" && nmethod != "svt")
    throw InvalidArgument("complete: nuclear_method must be admm or svt");
  ncfg.method = nmethod == "admm" ? NuclearMethod::kAdmm : NuclearMethod::kSvt;
  if (options.contains("tol")) ncfg.tol = scfg.tol;
  if (options.contains("max_iter")) ncfg.max_iter = scfg.max_iter;

  Json out{{"command", "complete"}, {"n1", m.n1()}, {"n2", m.n2()}, {"m", m.pattern().m()}};
  Matrix y;
  if (method == "lrma") {
    if (!rank) throw InvalidArgument("complete: lrma needs 'rank'");
    const SolveResult r = lrma_fixed_rank(m, *rank, scfg);
    y = r.y_hat;
    out["config"] = solver_config_json(scfg);
    out["config"]["rank"] = *rank;
    out["result"] = solve_json(r);
  } else if (method == "nuclear") {
    const SolveResult r = nuclear_norm_complete(m, ncfg);
    y = r.y_hat;
    out["config"] = nuclear_config_json(ncfg);
    out["result"] = solve_json(r);
  } else if (method == "rank1") {
    y = rank_one_complete(m);
    out["config"] = Json{{"consistency_tol", 1e-9}};
    out["result"] = Json{{"fit", num(weighted_fit(y, m))}};
  } else if (method == "schur") {
    if (!rank) throw InvalidArgument("complete: schur needs 'rank'");
    const CascadeResult c = schur_cascade(m, *rank, budget);
    y = c.y;
    Json filled = Json::array();
    for (const auto& [i, j] : c.filled) filled.push_back({i + 1, j + 1});
    out["config"] = Json{{"rank", *rank}, {"max_subset_search", budget}, {"max_condition", 1e12}};
    out["result"] = Json{{"filled", filled},
                         {"filled_count", c.filled.size()},
                         {"complete", c.filled.size() == m.pattern().complement_size()}};
  } else {
    throw InvalidArgument("complete: unknown method '" + method + "'");
  }
  out["config"]["method"] = method;
  const auto sv = singular_values(y);
  Json svj = Json::array();
  for (double s : sv) svj.push_back(num(s));
  out["singular_values"] = svj;
  out["numerical_rank"] = numerical_rank(sv, y.rows(), y.cols(), 0.0);
  if (threshold) {
    out["config"]["threshold"] = *threshold;
    out["threshold_rank"] = rank_from_singular_values(sv, *threshold);
  }
  out["y_hat"] = to_json(y);
  out["table"] = matrix_table(y);
  return out;
}

Json rank_test_report(const ObservedMatrix& m, const Json& options) {
  Options o(options, "rank-test");
  NoiseModel noise;
  noise.sigma = {o.require<double>("sigma")};
  noise.n = o.get<int>("sample_size", 1);
  const double alpha = o.get<double>("alpha", 0.05);
  RankScan scan;
  scan.r_max = o.maybe<int>("r_max");
  SolverConfig cfg;
  cfg.tol = o.get<double>("tol", cfg.tol);
  cfg.max_iter = o.get<int>("max_iter", cfg.max_iter);
  o.finish();
  const RankTestReport rep = sequential_rank_test(m, noise, alpha, cfg, scan);
  Json out = to_json(rep);
  out["command"] = "rank-test";
  out["config"] = solver_config_json(cfg);
  out["config"]["sigma"] = noise.sigma[0];
  out["config"]["sample_size"] = noise.n;
  out["config"]["alpha"] = alpha;
  out["config"]["r_max"] = rep.r_max;
  out["generic_bound"] = bounds_json(generic_bound(m.pattern()));
  return out;
}

Json experiment_report(const std::string& name, const Json& options) {
  Options o(options, "experiment " + name);
  const int n1 = o.get<int>("n1", 20);
  const int n2 = o.get<int>("n2", 25);
  const int reps = o.get<int>("reps", 50);
  const auto seed = o.get<std::uint64_t>("seed", 0);
  ExperimentResult res;
  if (name == "wellposed_probability") {
    const auto r_list = int_list(o, "r_list", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    const auto p_list = real_list(o, "p_list", {0.4, 0.6});
    o.finish();
    res = wellposed_probability(n1, n2, r_list, p_list, reps, seed);
  } else if (name == "mse_compare") {
    const auto r_list = int_list(o, "r_list", {1, 2, 3, 4, 5, 6});
    const auto p_list = real_list(o, "p_list", {0.4, 0.6, 0.8});
    NoiseSettings ns;
    ns.sigma = o.get<double>("sigma", 5.0);
    ns.sample_size = o.get<int>("sample_size", 100);
    ns.signal_scale = o.get<double>("signal_scale", 1.0);
    o.finish();
    res = mse_compare(n1, n2, r_list, p_list, ns, reps, seed);
  } else if (name == "qq" || name == "qq_nested") {
    InstanceSpec spec;
    spec.n1 = n1;
    spec.n2 = n2;
    spec.r_true = o.get<int>("r", 3);
    spec.m = o.get<long long>("m", 300);
    spec.sigma = o.get<double>("sigma", 5.0);
    spec.sample_size = o.get<int>("sample_size", 100);
    spec.signal_scale = o.get<double>("signal_scale", 100.0);
    spec.seed = seed;
    QqOptions qo;
    if (name == "qq_nested") qo.nested_extra = o.get<int>("extra", 5);
    qo.solver.tol = o.get<double>("tol", qo.solver.tol);
    qo.solver.max_iter = o.get<int>("max_iter", qo.solver.max_iter);
    o.finish();
    res = qq_data(spec, spec.r_true, reps, qo);
  } else if (name == "rank_selection") {
    const auto r_list = int_list(o, "r_list", {2, 3, 4, 5});
    SamplingRule sr;
    sr.m = o.maybe<long long>("m");
    sr.p = o.maybe<double>("p");
    if (!sr.m && !sr.p) sr.m = 300;
    NoiseSettings ns;
    ns.sigma = o.get<double>("sigma", 5.0);
    ns.sample_size = o.get<int>("sample_size", 100);
    ns.signal_scale = o.get<double>("signal_scale", 100.0);
    const auto thresholds = real_list(o, "thresholds", {0.25, 0.5, 0.75, 0.9, 0.99});
    o.finish();
    res = rank_selection_compare(n1, n2, r_list, sr, ns, reps, thresholds, seed);
  } else {
    throw InvalidArgument("experiment: unknown name '" + name +
                          "' (expected wellposed_probability, mse_compare, qq, qq_nested, "
                          "rank_selection)");
  }
  Json out = to_json(res);
  out["command"] = "experiment";
  out["config"] = options.is_object() ? options : Json::object();
  out["config"]["name"] = name;
  return out;
}

Json wilson_report(const Json& options) {
  Options o(options, "wilson");
  const double rank_tol = o.get<double>("rank_tol", 1e-6);
  const int trials = o.get<int>("trials", 5);
  const auto seed = o.get<std::uint64_t>("seed", 0);
  const auto thresholds = real_list(o, "thresholds", {0.25, 0.5, 0.9, 0.99, 0.999});
  o.finish();

  const WilsonFixture fx = wilson_fixture();
  const auto& p = fx.m.pattern();
  Json rows = Json::array();
  Json completions = Json::array();
  auto add_row = [&](const std::string& label, const Matrix& y) {
    Json row{label};
    for (int i = 0; i < 6; ++i) row.push_back(num(y(i, i)));
    const auto sv = singular_values(y);
    row.push_back(relative_rank(y, rank_tol));
    row.push_back(num(sv[3] / sv[0]));
    rows.push_back(std::move(row));
  };
  for (const Matrix* c : {&fx.completion1, &fx.completion2}) {
    const auto sv = singular_values(*c);
    completions.push_back(Json{{"diagonal", {(*c)(0, 0), (*c)(1, 1), (*c)(2, 2), (*c)(3, 3),
                                             (*c)(4, 4), (*c)(5, 5)}},
                               {"sigma4_over_sigma1", num(sv[3] / sv[0])},
                               {"wellposedness", to_json(wellposedness_check(*c, 3, p, rank_tol))}});
  }
  add_row("completion1", fx.completion1);
  add_row("completion2", fx.completion2);

  const NuclearConfig ncfg;
  const SolveResult nuc = nuclear_norm_complete(fx.m, ncfg);
  add_row("nuclear", nuc.y_hat);
  const auto nsv = singular_values(nuc.y_hat);
  Json thr = Json::object();
  for (double b : thresholds) thr[format_number(b)] = rank_from_singular_values(nsv, b);

  const SolverConfig lcfg;
  const SolveResult lr = lrma_fixed_rank(fx.m, 3, lcfg);
  add_row("lrma_rank3", lr.y_hat);

  const GenericBounds b = generic_bound(p);
  const CharRankResult cr = characteristic_rank(p, 3, trials, seed);
  Json nsvj = Json::array();
  for (double s : nsv) nsvj.push_back(num(s));
  return Json{
      {"command", "wilson"},
      {"config", {{"rank_tol", rank_tol}, {"trials", trials}, {"seed", seed},
                  {"thresholds", thresholds}, {"nuclear", nuclear_config_json(ncfg)},
                  {"lrma", solver_config_json(lcfg)}}},
      {"m", p.m()},
      {"generic_bound", bounds_json(b)},
      {"counts", counts_json(p)},
      {"irreducible", !is_reducible(p).reducible},
      {"df_rank3", degrees_of_freedom(3, 6, 6, static_cast<long long>(p.m()))},
      {"printed_diagonals", {fx.printed_diag1, fx.printed_diag2}},
      {"completions", completions},
      {"characteristic_rank", to_json(cr)},
      {"nuclear", {{"result", solve_json(nuc)},
                   {"singular_values", nsvj},
                   {"numerical_rank", relative_rank(nuc.y_hat, rank_tol)},
                   {"threshold_ranks", thr}}},
      {"lrma_rank3", {{"result", solve_json(lr)},
                      {"distance_to_completion1",
                       num((lr.y_hat - fx.completion1).frobenius_norm())},
                      {"distance_to_completion2",
                       num((lr.y_hat - fx.completion2).frobenius_norm())}}},
      {"table", table({"solution", "d1", "d2", "d3", "d4", "d5", "d6", "rank", "sigma4_over_sigma1"},
                      rows)}};
}

}  // namespace lrmc
