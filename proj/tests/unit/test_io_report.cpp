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

#include <gtest/gtest.h>

#include <sstream>

#include "lrmc/error.hpp"
#include "lrmc/geometry.hpp"
#include "lrmc/io.hpp"
#include "lrmc/report.hpp"
#include "support.hpp"

namespace lrmc {
namespace {

TEST(ReadCoordinate, PatternOnly) {
  std::istringstream in("# comment\n3 4\n1 1\n\n3 4\n2 2\n");
  const auto d = read_coordinate(in);
  EXPECT_EQ(d.pattern.n1(), 3);
  EXPECT_EQ(d.pattern.n2(), 4);
  EXPECT_EQ(d.pattern.m(), 3u);
  EXPECT_TRUE(d.pattern.contains(2, 3));
  EXPECT_FALSE(d.observed.has_value());
}

TEST(ReadCoordinate, ValuesFollowEntriesAfterSorting) {
  std::istringstream in("2 2\n2 2 4.5\n1 2 -1\n2 1 3\n");
  const auto d = read_coordinate(in);
  ASSERT_TRUE(d.observed.has_value());
  const Matrix z = d.observed->zero_filled();
  EXPECT_EQ(z(1, 1), 4.5);
  EXPECT_EQ(z(0, 1), -1.0);
  EXPECT_EQ(z(1, 0), 3.0);
}

TEST(ReadCoordinate, Errors) {
  for (const char* text : {"", "2\n1 1\n", "2 2\n3 1\n", "2 2\n1 1 1\n1 2\n", "2 2\n1 x\n",
                           "2 2\n1 1 nan\n", "2 2\n1 1\n1 1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_coordinate(in), InvalidArgument) << text;
  }
}

TEST(ReadDenseCsv, NaMarksMissing) {
  std::istringstream in("1,NA,3\n4,5,NA\n");
  const auto d = read_dense_csv(in);
  EXPECT_EQ(d.pattern.n1(), 2);
  EXPECT_EQ(d.pattern.n2(), 3);
  EXPECT_EQ(d.pattern.m(), 4u);
  EXPECT_FALSE(d.pattern.contains(0, 1));
  EXPECT_EQ(d.observed->zero_filled()(1, 1), 5.0);
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_dense_csv(ragged), InvalidArgument);
}

TEST(WriteCoordinate, RoundTrip) {
  const Matrix y = testing::random_low_rank(4, 5, 2, 1);
  const auto m = ObservedMatrix::sample(y, testing::bernoulli_pattern(4, 5, 0.6, 2));
  std::stringstream io;
  write_coordinate(io, m);
  const auto d = read_coordinate(io);
  EXPECT_EQ(d.pattern, m.pattern());
  for (std::size_t k = 0; k < m.values().size(); ++k)
    EXPECT_NEAR(d.observed->values()[k], m.values()[k], 1e-8 * std::abs(m.values()[k]) + 1e-12);
}

TEST(WriteMatrixCsv, RoundTrip) {
  const Matrix a = Matrix::from_rows({{1.5, -2}, {0.125, 1e-3}});
  std::stringstream io;
  write_matrix_csv(io, a);
  EXPECT_EQ(read_matrix_csv(io), a);
}

TEST(FormatNumber, NineSignificantDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(6.0 - std::sqrt(6.0)), "3.55051026");
  EXPECT_EQ(format_number(2.0), "2");
}

TEST(Reports, RejectUnknownOptions) {
  const auto p = testing::off_diagonal(6);
  EXPECT_THROW(analyze_report(p, Json{{"rank_maxx", 2}}), InvalidArgument);
  EXPECT_THROW(analyze_report(p, Json{{"rank_max", "two"}}), InvalidArgument);
  EXPECT_THROW(experiment_report("nope"), InvalidArgument);
}

TEST(Reports, AnalyzeWilsonPattern) {
  const Json j = analyze_report(testing::off_diagonal(6));
  EXPECT_EQ(j["command"], "analyze");
  EXPECT_EQ(j["m"], 30);
  EXPECT_NEAR(j["generic_bound"]["value"].get<double>(), 3.5505, 1e-4);
  EXPECT_EQ(j["reducibility"]["reducible"], false);
  EXPECT_EQ(j["counts"]["rows"], Json(std::vector<int>(6, 5)));
  EXPECT_EQ(j["counts"]["cols"], Json(std::vector<int>(6, 5)));
  EXPECT_TRUE(j.contains("config"));
}

TEST(Reports, JsonRoundTripIsByteIdentical) {
  const auto p = testing::off_diagonal(6);
  for (const Json& j : {analyze_report(p), certify_report(p, std::nullopt, Json{{"rank", 3}}),
                        wilson_report()}) {
    const std::string text = j.dump(2);
    EXPECT_EQ(Json::parse(text).dump(2), text);
  }
}

TEST(Reports, CertifyMatchesDirectCalls) {
  const auto fx = wilson_fixture();
  const Json j = certify_report(fx.m.pattern(), fx.completion1, Json{{"rank", 3}, {"tol", 1e-6}});
  const auto wp = wellposedness_check(fx.completion1, 3, fx.m.pattern(), 1e-6);
  EXPECT_EQ(j["wellposedness"], to_json(wp));
  EXPECT_EQ(j["characteristic_rank"], to_json(characteristic_rank(fx.m.pattern(), 3, 5, 0, 1e-6)));
  EXPECT_EQ(j["config"]["tol"], 1e-6);
  EXPECT_EQ(j["bound_consistent"], true);
}

TEST(Reports, CompleteRankOneAllOnes) {
  const ObservedMatrix m(ObservationPattern(2, 2, {{0, 1}, {1, 0}, {1, 1}}), {1.0, 1.0, 1.0});
  const Json j = complete_report(m, Json{{"method", "rank1"}});
  EXPECT_EQ(j["y_hat"][0][0], 1.0);
  EXPECT_EQ(j["table"]["rows"][0][0], 1.0);
  EXPECT_THROW(complete_report(m, Json{{"method", "lrma"}}), InvalidArgument);
}

TEST(Reports, RankTestRequiresSigma) {
  const ObservedMatrix m(ObservationPattern(2, 2, {{0, 1}, {1, 0}, {1, 1}}), {1.0, 1.0, 1.0});
  EXPECT_THROW(rank_test_report(m, Json::object()), InvalidArgument);
}

TEST(Reports, WilsonTableRows) {
  const Json j = wilson_report();
  const Json& rows = j["table"]["rows"];
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][0], "completion1");
  EXPECT_EQ(rows[2][0], "nuclear");
  EXPECT_EQ(j["nuclear"]["numerical_rank"], 4);
  EXPECT_EQ(j["df_rank3"], 3);
}

}  // namespace
}  // namespace lrmc
