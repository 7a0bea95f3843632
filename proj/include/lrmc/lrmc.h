/* Copyright 2026 The lrmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the low-rank matrix completion library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns an lrmc_status; on failure the message is
 * available from lrmc_last_error() on the same thread until the next call.
 * Indices are 0-based here; text files use 1-based indices.
 *
 * Report functions return a NUL-terminated JSON document in *json_out that
 * the caller releases with lrmc_string_free. Options are a JSON object (or
 * NULL for defaults).
 */

#ifndef LRMC_LRMC_H_
#define LRMC_LRMC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(LRMC_BUILDING_LIBRARY)
#define LRMC_API __attribute__((visibility("default")))
#else
#define LRMC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lrmc_status {
  LRMC_OK = 0,
  LRMC_INVALID_ARGUMENT = 1,
  LRMC_NUMERICAL_ERROR = 2,
  LRMC_INTERNAL_ERROR = 3
} lrmc_status;

typedef struct lrmc_pattern lrmc_pattern;
typedef struct lrmc_observed lrmc_observed;
typedef struct lrmc_matrix lrmc_matrix;

LRMC_API const char* lrmc_version(void);
LRMC_API const char* lrmc_last_error(void);
LRMC_API void lrmc_string_free(char* s);

/* Patterns. */
LRMC_API lrmc_status lrmc_pattern_create(int n1, int n2, const int* rows, const int* cols,
                                         size_t m, lrmc_pattern** out);
LRMC_API void lrmc_pattern_free(lrmc_pattern* p);
LRMC_API lrmc_status lrmc_pattern_shape(const lrmc_pattern* p, int* n1, int* n2, size_t* m);

/* Observed matrices. values[k] belongs to the k-th (rows[k], cols[k]) pair
 * given to lrmc_pattern_create. */
LRMC_API lrmc_status lrmc_observed_create(int n1, int n2, const int* rows, const int* cols,
                                          const double* values, size_t m, lrmc_observed** out);
LRMC_API void lrmc_observed_free(lrmc_observed* m);
/* Borrowed view of the pattern; valid while `m` lives. */
LRMC_API const lrmc_pattern* lrmc_observed_pattern(const lrmc_observed* m);

/* Loads a coordinate or dense CSV file. *pattern_out is always set;
 * *observed_out is set when the file carries values and NULL otherwise.
 * Either output pointer may be NULL if not wanted. */
LRMC_API lrmc_status lrmc_load(const char* path, lrmc_pattern** pattern_out,
                               lrmc_observed** observed_out);

/* Dense matrices, row-major. */
LRMC_API lrmc_status lrmc_matrix_create(size_t rows, size_t cols, const double* data,
                                        lrmc_matrix** out);
LRMC_API lrmc_status lrmc_matrix_load(const char* path, lrmc_matrix** out);
LRMC_API void lrmc_matrix_free(lrmc_matrix* a);
LRMC_API lrmc_status lrmc_matrix_shape(const lrmc_matrix* a, size_t* rows, size_t* cols);
/* Copies rows*cols entries into `out`. */
LRMC_API lrmc_status lrmc_matrix_copy(const lrmc_matrix* a, double* out, size_t capacity);

/* Scalar helpers. */
LRMC_API lrmc_status lrmc_generic_bound(int n1, int n2, long long m, double* value, int* ceil_out);
LRMC_API lrmc_status lrmc_estimated_bound(int n1, int n2, double p, double* value);
LRMC_API lrmc_status lrmc_chi2_cdf(double x, int df, double* out);

/* Reports. */
LRMC_API lrmc_status lrmc_analyze(const lrmc_pattern* p, const char* options_json,
                                  char** json_out);
/* `y` may be NULL: a random point of the requested rank is then used. */
LRMC_API lrmc_status lrmc_certify(const lrmc_pattern* p, const lrmc_matrix* y,
                                  const char* options_json, char** json_out);
LRMC_API lrmc_status lrmc_complete(const lrmc_observed* m, const char* options_json,
                                   char** json_out);
LRMC_API lrmc_status lrmc_rank_test(const lrmc_observed* m, const char* options_json,
                                    char** json_out);
LRMC_API lrmc_status lrmc_experiment(const char* name, const char* options_json,
                                     char** json_out);
LRMC_API lrmc_status lrmc_wilson(const char* options_json, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* LRMC_LRMC_H_ */
