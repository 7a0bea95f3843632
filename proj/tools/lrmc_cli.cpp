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

// Command-line front end. Talks to the library only through lrmc.h and
// renders the returned JSON reports as JSON or CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lrmc/lrmc.h"

namespace {

using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

struct Failure {
  int code;
  std::string message;
};

int exit_code(lrmc_status s) {
  switch (s) {
    case LRMC_OK:
      return kExitOk;
    case LRMC_NUMERICAL_ERROR:
      return kExitNumerical;
    case LRMC_INVALID_ARGUMENT:
      return kExitInvalid;
    default:
      return kExitNumerical;
  }
}

void check(lrmc_status s) {
  if (s != LRMC_OK) throw Failure{exit_code(s), lrmc_last_error()};
}

struct PatternDeleter {
  void operator()(lrmc_pattern* p) const { lrmc_pattern_free(p); }
};
struct ObservedDeleter {
  void operator()(lrmc_observed* m) const { lrmc_observed_free(m); }
};
struct MatrixDeleter {
  void operator()(lrmc_matrix* a) const { lrmc_matrix_free(a); }
};
using PatternPtr = std::unique_ptr<lrmc_pattern, PatternDeleter>;
using ObservedPtr = std::unique_ptr<lrmc_observed, ObservedDeleter>;
using MatrixPtr = std::unique_ptr<lrmc_matrix, MatrixDeleter>;

// Takes ownership of a library string and parses it.
Json take_json(char* raw) {
  std::unique_ptr<char, void (*)(char*)> guard(raw, lrmc_string_free);
  return Json::parse(raw);
}

std::string cell(const Json& v) {
  if (v.is_null()) return "NA";
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_array()) {
    out << prefix;
    for (const auto& v : j) out << ',' << cell(v);
    out << '\n';
  } else {
    out << prefix << ',' << cell(j) << '\n';
  }
}

void write_csv(const Json& report, std::ostream& out) {
  if (!report.contains("table")) {
    out << "key,value\n";
    flatten(report, "", out);
    return;
  }
  const Json& t = report["table"];
  bool first = true;
  for (const auto& c : t["columns"]) {
    out << (first ? "" : ",") << c.get<std::string>();
    first = false;
  }
  out << '\n';
  for (const auto& row : t["rows"]) {
    first = true;
    for (const auto& v : row) {
      out << (first ? "" : ",") << cell(v);
      first = false;
    }
    out << '\n';
  }
}

// "key=value" where value is parsed as JSON when possible and kept as a
// string otherwise.
void apply_sets(const std::vector<std::string>& sets, Json& options) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Failure{kExitInvalid, "--set expects key=value, got '" + s + "'"};
    const std::string key = s.substr(0, eq);
    const std::string text = s.substr(eq + 1);
    Json v = Json::parse(text, nullptr, false);
    options[key] = v.is_discarded() ? Json(text) : v;
  }
}

struct Args {
  std::string format = "csv";
  std::string output;
  std::string input;
  std::string completion;
  std::string method = "lrma";
  std::string name;
  std::string init = "zero";
  std::string nuclear_method = "admm";
  std::optional<int> rank;
  std::optional<int> rank_max;
  std::optional<int> r_max;
  std::optional<int> max_iter;
  std::optional<int> trials;
  std::optional<int> sample_size;
  std::optional<double> tol;
  std::optional<double> alpha;
  std::optional<double> sigma;
  std::optional<double> threshold;
  std::optional<unsigned long long> seed;
  std::vector<std::string> sets;
};

template <class T>
void put(Json& o, const char* key, const std::optional<T>& v) {
  if (v) o[key] = *v;
}

PatternPtr load_pattern(const std::string& path, ObservedPtr* observed) {
  lrmc_pattern* p = nullptr;
  lrmc_observed* m = nullptr;
  check(lrmc_load(path.c_str(), &p, observed ? &m : nullptr));
  if (observed) observed->reset(m);
  return PatternPtr(p);
}

ObservedPtr load_observed(const std::string& path) {
  ObservedPtr m;
  load_pattern(path, &m);
  if (!m) throw Failure{kExitInvalid, "'" + path + "' has no observed values"};
  return m;
}

Json run_command(const std::string& command, const Args& a) {
  Json o = Json::object();
  char* raw = nullptr;
  if (command == "analyze") {
    put(o, "rank_max", a.rank_max);
    apply_sets(a.sets, o);
    const PatternPtr p = load_pattern(a.input, nullptr);
    check(lrmc_analyze(p.get(), o.dump().c_str(), &raw));
  } else if (command == "certify") {
    put(o, "rank", a.rank);
    put(o, "tol", a.tol);
    put(o, "trials", a.trials);
    put(o, "seed", a.seed);
    apply_sets(a.sets, o);
    if (a.completion.empty() && !a.rank)
      throw Failure{kExitInvalid, "certify: --rank is required without --completion"};
    const PatternPtr p = load_pattern(a.input, nullptr);
    MatrixPtr y;
    if (!a.completion.empty()) {
      lrmc_matrix* raw_y = nullptr;
      check(lrmc_matrix_load(a.completion.c_str(), &raw_y));
      y.reset(raw_y);
    }
    check(lrmc_certify(p.get(), y.get(), o.dump().c_str(), &raw));
  } else if (command == "complete") {
    o["method"] = a.method;
    o["init"] = a.init;
    o["nuclear_method"] = a.nuclear_method;
    put(o, "rank", a.rank);
    put(o, "tol", a.tol);
    put(o, "max_iter", a.max_iter);
    put(o, "seed", a.seed);
    put(o, "threshold", a.threshold);
    apply_sets(a.sets, o);
    if ((a.method == "lrma" || a.method == "schur") && !o.contains("rank"))
      throw Failure{kExitInvalid, "complete: --rank is required for method " + a.method};
    const ObservedPtr m = load_observed(a.input);
    check(lrmc_complete(m.get(), o.dump().c_str(), &raw));
  } else if (command == "rank-test") {
    put(o, "sigma", a.sigma);
    put(o, "sample_size", a.sample_size);
    put(o, "alpha", a.alpha);
    put(o, "r_max", a.r_max);
    put(o, "tol", a.tol);
    put(o, "max_iter", a.max_iter);
    apply_sets(a.sets, o);
    if (!o.contains("sigma")) throw Failure{kExitInvalid, "rank-test: --sigma is required"};
    const ObservedPtr m = load_observed(a.input);
    check(lrmc_rank_test(m.get(), o.dump().c_str(), &raw));
  } else if (command == "experiment") {
    put(o, "seed", a.seed);
    put(o, "tol", a.tol);
    put(o, "max_iter", a.max_iter);
    put(o, "sigma", a.sigma);
    put(o, "sample_size", a.sample_size);
    apply_sets(a.sets, o);
    check(lrmc_experiment(a.name.c_str(), o.dump().c_str(), &raw));
  } else if (command == "wilson") {
    put(o, "seed", a.seed);
    put(o, "trials", a.trials);
    put(o, "rank_tol", a.tol);
    apply_sets(a.sets, o);
    check(lrmc_wilson(o.dump().c_str(), &raw));
  } else {
    throw Failure{kExitInvalid, "unknown command '" + command + "'"};
  }
  return take_json(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank matrix completion: identifiability, completion and rank selection"};
  app.set_version_flag("--version", std::string(lrmc_version()));
  app.require_subcommand(1, 1);
  app.fallthrough();

  Args a;
  app.add_option("--format", a.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("-o,--output", a.output, "Write the report to this path instead of stdout");

  auto with_set = [&](CLI::App* c) {
    c->add_option("--set", a.sets, "Extra option key=value (value parsed as JSON if possible)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Pattern diagnostics and bounds");
  analyze->add_option("input", a.input, "Pattern or data file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--rank-max", a.rank_max, "Largest rank in the f(r, m) table");
  with_set(analyze);

  CLI::App* certify = app.add_subcommand("certify", "Well-posedness certificate at a point");
  certify->add_option("input", a.input, "Pattern or data file")->required()->check(CLI::ExistingFile);
  certify->add_option("--completion", a.completion, "Dense CSV completion to certify")
      ->check(CLI::ExistingFile);
  certify->add_option("--rank", a.rank, "Rank (required without --completion)");
  certify->add_option("--tol", a.tol, "Relative rank tolerance");
  certify->add_option("--trials", a.trials, "Random points for the characteristic rank");
  certify->add_option("--seed", a.seed, "Random seed");
  with_set(certify);

  CLI::App* complete = app.add_subcommand("complete", "Complete an observed matrix");
  complete->add_option("input", a.input, "Data file")->required()->check(CLI::ExistingFile);
  complete->add_option("--method", a.method, "Solver")
      ->check(CLI::IsMember({"lrma", "nuclear", "rank1", "schur"}))
      ->capture_default_str();
  complete->add_option("--rank", a.rank, "Target rank (lrma, schur)");
  complete->add_option("--tol", a.tol, "Convergence tolerance");
  complete->add_option("--max-iter", a.max_iter, "Iteration cap");
  complete->add_option("--seed", a.seed, "Random seed");
  complete->add_option("--threshold", a.threshold, "Threshold b for the reported rank");
  complete->add_option("--init", a.init, "LRMA start")
      ->check(CLI::IsMember({"zero", "random"}))
      ->capture_default_str();
  complete->add_option("--nuclear-method", a.nuclear_method, "Nuclear-norm algorithm")
      ->check(CLI::IsMember({"admm", "svt"}))
      ->capture_default_str();
  with_set(complete);

  CLI::App* rank_test = app.add_subcommand("rank-test", "Sequential chi-square rank test");
  rank_test->add_option("input", a.input, "Data file")->required()->check(CLI::ExistingFile);
  rank_test->add_option("--sigma", a.sigma, "Noise standard deviation")->required();
  rank_test->add_option("--sample-size", a.sample_size, "Averaged samples per entry (N)");
  rank_test->add_option("--alpha", a.alpha, "Significance level");
  rank_test->add_option("--r-max", a.r_max, "Largest rank tested");
  rank_test->add_option("--tol", a.tol, "Solver tolerance");
  rank_test->add_option("--max-iter", a.max_iter, "Solver iteration cap");
  with_set(rank_test);

  CLI::App* experiment = app.add_subcommand("experiment", "Run a named experiment");
  experiment->add_option("name", a.name, "Experiment name")
      ->required()
      ->check(CLI::IsMember(
          {"wellposed_probability", "mse_compare", "qq", "qq_nested", "rank_selection"}));
  experiment->add_option("--seed", a.seed, "Master seed");
  experiment->add_option("--tol", a.tol, "Solver tolerance (qq, qq_nested)");
  experiment->add_option("--max-iter", a.max_iter, "Solver iteration cap (qq, qq_nested)");
  experiment->add_option("--sigma", a.sigma, "Noise standard deviation");
  experiment->add_option("--sample-size", a.sample_size, "Averaged samples per entry (N)");
  with_set(experiment);

  CLI::App* wilson = app.add_subcommand("wilson", "The 6 x 6 worked example");
  wilson->add_option("--tol", a.tol, "Relative rank tolerance");
  wilson->add_option("--trials", a.trials, "Random points for the characteristic rank");
  wilson->add_option("--seed", a.seed, "Random seed");
  with_set(wilson);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Json report = run_command(command, a);
    std::ostringstream text;
    if (a.format == "json")
      text << report.dump(2) << '\n';
    else
      write_csv(report, text);
    if (a.output.empty()) {
      std::cout << text.str();
    } else {
      std::ofstream out(a.output);
      if (!out || !(out << text.str()))
        throw Failure{kExitInvalid, "cannot write '" + a.output + "'"};
    }
    return kExitOk;
  } catch (const Failure& f) {
    std::cerr << "lrmc " << command << ": " << f.message << '\n';
    return f.code;
  } catch (const Json::exception& e) {
    std::cerr << "lrmc " << command << ": " << e.what() << '\n';
    return kExitInvalid;
  }
}
