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

// JSON reports shared by the C API and the command line. Every report has
// "command", "config" (the resolved options, including tolerances and seeds)
// and, when tabular, "table": {"columns": [...], "rows": [[...], ...]}.
// Options are JSON objects; unknown keys are rejected.

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "lrmc/geometry.hpp"
#include "lrmc/harness.hpp"
#include "lrmc/linalg.hpp"
#include "lrmc/pattern.hpp"
#include "lrmc/solvers.hpp"
#include "lrmc/stats.hpp"

namespace lrmc {

using Json = nlohmann::json;

Json to_json(const Matrix& a);
Json to_json(const WellPosednessReport& r);
Json to_json(const CharRankResult& r);
Json to_json(const RankTestReport& r);
Json to_json(const ExperimentResult& r);

/// Options: {"rank_max": int}.
Json analyze_report(const ObservationPattern& p, const Json& options = Json::object());

/// Options: {"rank": int, "tol": real, "trials": int, "seed": int}. Without
/// `y` a random regular point V W^T is drawn from the seed and "rank" is
/// required; with `y` the rank defaults to its numerical rank at tol.
Json certify_report(const ObservationPattern& p, const std::optional<Matrix>& y,
                    const Json& options = Json::object());

/// Options: {"method": "lrma"|"nuclear"|"rank1"|"schur", "rank", "tol",
/// "max_iter", "seed", "init": "zero"|"random", "nuclear_method":
/// "admm"|"svt", "tau", "delta", "rho", "threshold", "max_subset_search"}.
Json complete_report(const ObservedMatrix& m, const Json& options = Json::object());

/// Options: {"sigma" (required), "sample_size", "alpha", "r_max", "tol",
/// "max_iter"}.
Json rank_test_report(const ObservedMatrix& m, const Json& options);

/// Named harness experiment; see the README for each option set.
Json experiment_report(const std::string& name, const Json& options = Json::object());

/// The 6 x 6 example end to end: fixture checks, nuclear and LRMA runs.
Json wilson_report(const Json& options = Json::object());

}  // namespace lrmc
