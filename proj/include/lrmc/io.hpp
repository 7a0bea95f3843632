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

// Text formats.
//
// Coordinate: first line "n1 n2", then one "i j" or "i j value" line per
// observed entry, 1-based. Lines whose first non-blank character is '#' and
// blank lines are ignored. Either every entry carries a value or none does.
//
// Dense CSV: one line per row, comma separated; the token NA marks an
// unobserved cell.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "lrmc/linalg.hpp"
#include "lrmc/pattern.hpp"
#include "lrmc/solvers.hpp"

namespace lrmc {

struct LoadedData {
  ObservationPattern pattern;
  /// Present when the input carried values.
  std::optional<ObservedMatrix> observed;
};

LoadedData read_coordinate(std::istream& in);
/// Cells other than NA become observed entries.
LoadedData read_dense_csv(std::istream& in);
/// Dense CSV without NA cells.
Matrix read_matrix_csv(std::istream& in);

/// Detects the format from the first data line: a comma means dense CSV.
LoadedData load_data(const std::string& path);
Matrix load_matrix(const std::string& path);

void write_coordinate(std::ostream& out, const ObservedMatrix& m);
void write_coordinate(std::ostream& out, const ObservationPattern& p);
void write_matrix_csv(std::ostream& out, const Matrix& a);

/// 9 significant digits, the precision of all text output.
std::string format_number(double x);

}  // namespace lrmc
