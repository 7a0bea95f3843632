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

#include "lrmc/lrmc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "lrmc/error.hpp"
#include "lrmc/io.hpp"
#include "lrmc/report.hpp"
#include "lrmc/stats.hpp"

struct lrmc_pattern {
  lrmc::ObservationPattern p;
};

struct lrmc_observed {
  lrmc::ObservedMatrix m;
  lrmc_pattern view;
};

struct lrmc_matrix {
  lrmc::Matrix a;
};

namespace {

thread_local std::string g_last_error;

lrmc_status fail(lrmc_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
lrmc_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return LRMC_OK;
  } catch (const lrmc::InvalidArgument& e) {
    return fail(LRMC_INVALID_ARGUMENT, e.what());
  } catch (const lrmc::NumericalError& e) {
    return fail(LRMC_NUMERICAL_ERROR, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(LRMC_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LRMC_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(LRMC_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(LRMC_INTERNAL_ERROR, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (!p) throw lrmc::InvalidArgument(std::string(name) + " is NULL");
}

lrmc::Json parse_options(const char* options_json) {
  if (!options_json || !*options_json) return lrmc::Json::object();
  try {
    return lrmc::Json::parse(options_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw lrmc::InvalidArgument(std::string("options are not valid JSON: ") + e.what());
  }
}

char* to_c_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const lrmc::Json& j, char** json_out) { *json_out = to_c_string(j.dump(2)); }

std::vector<lrmc::Index> indices(const int* rows, const int* cols, size_t m) {
  if (m > 0) {
    need(rows, "rows");
    need(cols, "cols");
  }
  std::vector<lrmc::Index> e(m);
  for (size_t k = 0; k < m; ++k) e[k] = {rows[k], cols[k]};
  return e;
}

}  // namespace

extern "C" {

const char* lrmc_version(void) { return "0.1.0"; }

const char* lrmc_last_error(void) { return g_last_error.c_str(); }

void lrmc_string_free(char* s) { std::free(s); }

lrmc_status lrmc_pattern_create(int n1, int n2, const int* rows, const int* cols, size_t m,
                                lrmc_pattern** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new lrmc_pattern{lrmc::ObservationPattern(n1, n2, indices(rows, cols, m))};
  });
}

void lrmc_pattern_free(lrmc_pattern* p) { delete p; }

lrmc_status lrmc_pattern_shape(const lrmc_pattern* p, int* n1, int* n2, size_t* m) {
  return guarded([&] {
    need(p, "pattern");
    if (n1) *n1 = p->p.n1();
    if (n2) *n2 = p->p.n2();
    if (m) *m = p->p.m();
  });
}

lrmc_status lrmc_observed_create(int n1, int n2, const int* rows, const int* cols,
                                 const double* values, size_t m, lrmc_observed** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (m > 0) need(values, "values");
    const auto e = indices(rows, cols, m);
    lrmc::ObservationPattern p(n1, n2, e);
    std::vector<double> aligned(m);
    for (size_t k = 0; k < m; ++k)
      aligned[static_cast<size_t>(p.position(e[k].row, e[k].col))] = values[k];
    lrmc::ObservedMatrix obs(p, std::move(aligned));
    *out = new lrmc_observed{obs, lrmc_pattern{p}};
  });
}

void lrmc_observed_free(lrmc_observed* m) { delete m; }

const lrmc_pattern* lrmc_observed_pattern(const lrmc_observed* m) { return m ? &m->view : nullptr; }

lrmc_status lrmc_load(const char* path, lrmc_pattern** pattern_out, lrmc_observed** observed_out) {
  return guarded([&] {
    need(path, "path");
    if (pattern_out) *pattern_out = nullptr;
    if (observed_out) *observed_out = nullptr;
    lrmc::LoadedData d = lrmc::load_data(path);
    if (observed_out && d.observed)
      *observed_out = new lrmc_observed{*d.observed, lrmc_pattern{d.pattern}};
    if (pattern_out) *pattern_out = new lrmc_pattern{std::move(d.pattern)};
  });
}

lrmc_status lrmc_matrix_create(size_t rows, size_t cols, const double* data, lrmc_matrix** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (rows * cols > 0) need(data, "data");
    *out = new lrmc_matrix{lrmc::Matrix(rows, cols, std::vector<double>(data, data + rows * cols))};
  });
}

lrmc_status lrmc_matrix_load(const char* path, lrmc_matrix** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new lrmc_matrix{lrmc::load_matrix(path)};
  });
}

void lrmc_matrix_free(lrmc_matrix* a) { delete a; }

lrmc_status lrmc_matrix_shape(const lrmc_matrix* a, size_t* rows, size_t* cols) {
  return guarded([&] {
    need(a, "matrix");
    if (rows) *rows = a->a.rows();
    if (cols) *cols = a->a.cols();
  });
}

lrmc_status lrmc_matrix_copy(const lrmc_matrix* a, double* out, size_t capacity) {
  return guarded([&] {
    need(a, "matrix");
    need(out, "out");
    if (capacity < a->a.size()) throw lrmc::InvalidArgument("output buffer too small");
    std::memcpy(out, a->a.data().data(), a->a.size() * sizeof(double));
  });
}

lrmc_status lrmc_generic_bound(int n1, int n2, long long m, double* value, int* ceil_out) {
  return guarded([&] {
    const auto b = lrmc::generic_bound(n1, n2, m);
    if (value) *value = b.value;
    if (ceil_out) *ceil_out = b.ceil;
  });
}

lrmc_status lrmc_estimated_bound(int n1, int n2, double p, double* value) {
  return guarded([&] {
    need(value, "value");
    *value = lrmc::estimated_bound(n1, n2, p);
  });
}

lrmc_status lrmc_chi2_cdf(double x, int df, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = lrmc::chi2_cdf(x, df);
  });
}

lrmc_status lrmc_analyze(const lrmc_pattern* p, const char* options_json, char** json_out) {
  return guarded([&] {
    need(p, "pattern");
    need(json_out, "json_out");
    emit(lrmc::analyze_report(p->p, parse_options(options_json)), json_out);
  });
}

lrmc_status lrmc_certify(const lrmc_pattern* p, const lrmc_matrix* y, const char* options_json,
                         char** json_out) {
  return guarded([&] {
    need(p, "pattern");
    need(json_out, "json_out");
    std::optional<lrmc::Matrix> point;
    if (y) point = y->a;
    emit(lrmc::certify_report(p->p, point, parse_options(options_json)), json_out);
  });
}

lrmc_status lrmc_complete(const lrmc_observed* m, const char* options_json, char** json_out) {
  return guarded([&] {
    need(m, "observed");
    need(json_out, "json_out");
    emit(lrmc::complete_report(m->m, parse_options(options_json)), json_out);
  });
}

lrmc_status lrmc_rank_test(const lrmc_observed* m, const char* options_json, char** json_out) {
  return guarded([&] {
    need(m, "observed");
    need(json_out, "json_out");
    emit(lrmc::rank_test_report(m->m, parse_options(options_json)), json_out);
  });
}

lrmc_status lrmc_experiment(const char* name, const char* options_json, char** json_out) {
  return guarded([&] {
    need(name, "name");
    need(json_out, "json_out");
    emit(lrmc::experiment_report(name, parse_options(options_json)), json_out);
  });
}

lrmc_status lrmc_wilson(const char* options_json, char** json_out) {
  return guarded([&] {
    need(json_out, "json_out");
    emit(lrmc::wilson_report(parse_options(options_json)), json_out);
  });
}

}  // extern "C"
