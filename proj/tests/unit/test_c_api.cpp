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

// Exercises the shared library strictly through its C header.

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "lrmc/lrmc.h"

namespace {

using Json = nlohmann::json;

Json take(char* raw) {
  Json j = Json::parse(raw);
  lrmc_string_free(raw);
  return j;
}

std::string data_path(const char* name) { return std::string(LRMC_TEST_DATA_DIR) + "/" + name; }

TEST(CApi, Version) { EXPECT_STREQ(lrmc_version(), "0.1.0"); }

TEST(CApi, PatternLifecycle) {
  const int rows[] = {0, 1, 1};
  const int cols[] = {1, 0, 1};
  lrmc_pattern* p = nullptr;
  ASSERT_EQ(lrmc_pattern_create(2, 2, rows, cols, 3, &p), LRMC_OK);
  int n1 = 0, n2 = 0;
  size_t m = 0;
  ASSERT_EQ(lrmc_pattern_shape(p, &n1, &n2, &m), LRMC_OK);
  EXPECT_EQ(n1, 2);
  EXPECT_EQ(n2, 2);
  EXPECT_EQ(m, 3u);
  lrmc_pattern_free(p);
}

TEST(CApi, ErrorsCarryMessages) {
  const int rows[] = {0, 0};
  const int cols[] = {0, 0};
  lrmc_pattern* p = nullptr;
  EXPECT_EQ(lrmc_pattern_create(2, 2, rows, cols, 2, &p), LRMC_INVALID_ARGUMENT);
  EXPECT_EQ(p, nullptr);
  EXPECT_NE(std::string(lrmc_last_error()).find("duplicate"), std::string::npos);
  EXPECT_EQ(lrmc_pattern_shape(nullptr, nullptr, nullptr, nullptr), LRMC_INVALID_ARGUMENT);
  char* out = nullptr;
  EXPECT_EQ(lrmc_wilson("{not json", &out), LRMC_INVALID_ARGUMENT);
  EXPECT_EQ(lrmc_wilson("{\"bogus\": 1}", &out), LRMC_INVALID_ARGUMENT);
  EXPECT_EQ(out, nullptr);
  double v = 0.0;
  EXPECT_EQ(lrmc_generic_bound(3, 3, 10, &v, nullptr), LRMC_INVALID_ARGUMENT);
  EXPECT_EQ(lrmc_load("/nonexistent/file.txt", nullptr, nullptr), LRMC_INVALID_ARGUMENT);
}

TEST(CApi, RankOneRejectsObservedZero) {
  const int rows[] = {0, 0, 1};
  const int cols[] = {0, 1, 0};
  const double vals[] = {0.0, 1.0, 1.0};
  lrmc_observed* m = nullptr;
  ASSERT_EQ(lrmc_observed_create(2, 2, rows, cols, vals, 3, &m), LRMC_OK);
  char* out = nullptr;
  EXPECT_EQ(lrmc_complete(m, "{\"method\": \"rank1\"}", &out), LRMC_INVALID_ARGUMENT);
  lrmc_observed_free(m);
}

TEST(CApi, ObservedValuesFollowInputOrder) {
  const int rows[] = {1, 0, 1};
  const int cols[] = {1, 1, 0};
  const double vals[] = {6.0, 2.0, 3.0};
  lrmc_observed* m = nullptr;
  ASSERT_EQ(lrmc_observed_create(2, 2, rows, cols, vals, 3, &m), LRMC_OK);
  char* out = nullptr;
  ASSERT_EQ(lrmc_complete(m, "{\"method\": \"rank1\"}", &out), LRMC_OK);
  const Json j = take(out);
  EXPECT_DOUBLE_EQ(j["y_hat"][0][0].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["y_hat"][1][1].get<double>(), 6.0);
  int n1 = 0;
  ASSERT_EQ(lrmc_pattern_shape(lrmc_observed_pattern(m), &n1, nullptr, nullptr), LRMC_OK);
  EXPECT_EQ(n1, 2);
  lrmc_observed_free(m);
}

TEST(CApi, MatrixRoundTrip) {
  const double data[] = {1, 2, 3, 4, 5, 6};
  lrmc_matrix* a = nullptr;
  ASSERT_EQ(lrmc_matrix_create(2, 3, data, &a), LRMC_OK);
  size_t r = 0, c = 0;
  ASSERT_EQ(lrmc_matrix_shape(a, &r, &c), LRMC_OK);
  EXPECT_EQ(r, 2u);
  EXPECT_EQ(c, 3u);
  double back[6] = {};
  EXPECT_EQ(lrmc_matrix_copy(a, back, 5), LRMC_INVALID_ARGUMENT);
  ASSERT_EQ(lrmc_matrix_copy(a, back, 6), LRMC_OK);
  for (int k = 0; k < 6; ++k) EXPECT_EQ(back[k], data[k]);
  lrmc_matrix_free(a);
}

TEST(CApi, ScalarHelpers) {
  double v = 0.0;
  int c = 0;
  ASSERT_EQ(lrmc_generic_bound(6, 6, 30, &v, &c), LRMC_OK);
  EXPECT_NEAR(v, 6.0 - std::sqrt(6.0), 1e-12);
  EXPECT_EQ(c, 4);
  ASSERT_EQ(lrmc_estimated_bound(40, 50, 0.5, &v), LRMC_OK);
  EXPECT_NEAR(v, 45.0 - std::sqrt(1025.0), 1e-12);
  ASSERT_EQ(lrmc_chi2_cdf(2.0, 2, &v), LRMC_OK);
  EXPECT_NEAR(v, 1.0 - std::exp(-1.0), 1e-12);
}

TEST(CApi, LoadBothFormatsAgree) {
  lrmc_pattern* p1 = nullptr;
  lrmc_observed* m1 = nullptr;
  lrmc_pattern* p2 = nullptr;
  lrmc_observed* m2 = nullptr;
  ASSERT_EQ(lrmc_load(data_path("wilson.txt").c_str(), &p1, &m1), LRMC_OK);
  ASSERT_EQ(lrmc_load(data_path("wilson.csv").c_str(), &p2, &m2), LRMC_OK);
  ASSERT_NE(m1, nullptr);
  ASSERT_NE(m2, nullptr);
  char* a = nullptr;
  char* b = nullptr;
  ASSERT_EQ(lrmc_analyze(p1, nullptr, &a), LRMC_OK);
  ASSERT_EQ(lrmc_analyze(p2, nullptr, &b), LRMC_OK);
  const Json ja = take(a);
  EXPECT_EQ(ja, take(b));
  EXPECT_EQ(ja["m"], 30);
  EXPECT_EQ(ja["reducibility"]["reducible"], false);
  ASSERT_EQ(lrmc_complete(m1, "{\"method\": \"nuclear\"}", &a), LRMC_OK);
  ASSERT_EQ(lrmc_complete(m2, "{\"method\": \"nuclear\"}", &b), LRMC_OK);
  EXPECT_EQ(take(a), take(b));
  lrmc_pattern_free(p1);
  lrmc_pattern_free(p2);
  lrmc_observed_free(m1);
  lrmc_observed_free(m2);
}

TEST(CApi, CertifyWithAndWithoutPoint) {
  lrmc_pattern* p = nullptr;
  ASSERT_EQ(lrmc_load(data_path("wilson.txt").c_str(), &p, nullptr), LRMC_OK);
  lrmc_matrix* y = nullptr;
  ASSERT_EQ(lrmc_matrix_load(data_path("wilson_completion1.csv").c_str(), &y), LRMC_OK);
  char* out = nullptr;
  ASSERT_EQ(lrmc_certify(p, y, "{\"tol\": 1e-6}", &out), LRMC_OK);
  const Json j = take(out);
  EXPECT_EQ(j["config"]["rank"], 3);
  EXPECT_EQ(j["wellposedness"]["well_posed"], true);
  EXPECT_EQ(lrmc_certify(p, nullptr, nullptr, &out), LRMC_INVALID_ARGUMENT);
  ASSERT_EQ(lrmc_certify(p, nullptr, "{\"rank\": 3, \"seed\": 5}", &out), LRMC_OK);
  EXPECT_EQ(take(out)["characteristic_rank"]["rho"], 33);
  lrmc_matrix_free(y);
  lrmc_pattern_free(p);
}

TEST(CApi, ExperimentIsDeterministic) {
  const char* opts = "{\"n1\": 10, \"n2\": 12, \"reps\": 3, \"r_list\": [1, 2], \"p_list\": [0.6]}";
  char* a = nullptr;
  char* b = nullptr;
  ASSERT_EQ(lrmc_experiment("wellposed_probability", opts, &a), LRMC_OK);
  ASSERT_EQ(lrmc_experiment("wellposed_probability", opts, &b), LRMC_OK);
  EXPECT_EQ(std::string(a), std::string(b));
  lrmc_string_free(a);
  lrmc_string_free(b);
}

}  // namespace
