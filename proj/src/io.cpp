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

#include "lrmc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "lrmc/error.hpp"

namespace lrmc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool skip(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

std::string where(int line_no) { return "line " + std::to_string(line_no) + ": "; }

double parse_double(const std::string& tok, int line_no) {
  const std::string t = trim(tok);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(x))
    throw InvalidArgument(where(line_no) + "cannot parse number '" + t + "'");
  return x;
}

long long parse_int(const std::string& tok, int line_no) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw InvalidArgument(where(line_no) + "cannot parse integer '" + tok + "'");
  return x;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return in;
}

}  // namespace

LoadedData read_coordinate(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n1 = 0;
  int n2 = 0;
  bool header = false;
  std::vector<Index> entries;
  std::vector<double> values;
  int with_value = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip(line)) continue;
    const auto tok = split_ws(line);
    if (!header) {
      if (tok.size() != 2) throw InvalidArgument(where(line_no) + "expected header 'n1 n2'");
      n1 = static_cast<int>(parse_int(tok[0], line_no));
      n2 = static_cast<int>(parse_int(tok[1], line_no));
      header = true;
      continue;
    }
    if (tok.size() != 2 && tok.size() != 3)
      throw InvalidArgument(where(line_no) + "expected 'i j' or 'i j value'");
    const int has = tok.size() == 3 ? 1 : 0;
    if (with_value >= 0 && has != with_value)
      throw InvalidArgument(where(line_no) + "mixes entries with and without values");
    with_value = has;
    const long long i = parse_int(tok[0], line_no);
    const long long j = parse_int(tok[1], line_no);
    if (i < 1 || i > n1 || j < 1 || j > n2)
      throw InvalidArgument(where(line_no) + "index (" + tok[0] + ", " + tok[1] +
                            ") outside the " + std::to_string(n1) + "x" + std::to_string(n2) +
                            " grid");
    entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1)});
    if (has) values.push_back(parse_double(tok[2], line_no));
  }
  if (!header) throw InvalidArgument("coordinate input: missing 'n1 n2' header");
  // Values follow the input order; the pattern sorts entries, so realign.
  std::vector<Index> order = entries;
  ObservationPattern p(n1, n2, std::move(entries));
  LoadedData out{p, std::nullopt};
  if (with_value == 1) {
    std::vector<double> aligned(p.m());
    for (std::size_t k = 0; k < order.size(); ++k)
      aligned[static_cast<std::size_t>(p.position(order[k].row, order[k].col))] = values[k];
    out.observed = ObservedMatrix(p, std::move(aligned));
  }
  return out;
}

LoadedData read_dense_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<Index> entries;
  std::vector<double> values;
  int n1 = 0;
  int n2 = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip(line)) continue;
    const auto cells = split_csv(line);
    if (n2 < 0) n2 = static_cast<int>(cells.size());
    if (static_cast<int>(cells.size()) != n2)
      throw InvalidArgument(where(line_no) + "expected " + std::to_string(n2) + " cells, found " +
                            std::to_string(cells.size()));
    for (int j = 0; j < n2; ++j) {
      if (cells[j] == "NA") continue;
      entries.push_back({n1, j});
      values.push_back(parse_double(cells[j], line_no));
    }
    ++n1;
  }
  if (n1 == 0) throw InvalidArgument("csv input: no rows");
  ObservationPattern p(n1, n2, std::move(entries));
  return {p, ObservedMatrix(p, std::move(values))};
}

Matrix read_matrix_csv(std::istream& in) {
  const LoadedData d = read_dense_csv(in);
  if (d.pattern.complement_size() != 0)
    throw InvalidArgument("matrix csv: NA cells are not allowed here");
  return d.observed->zero_filled();
}

LoadedData load_data(const std::string& path) {
  std::ifstream in = open(path);
  std::string line;
  std::string first;
  while (std::getline(in, line))
    if (!skip(line)) {
      first = line;
      break;
    }
  in.clear();
  in.seekg(0);
  return first.find(',') != std::string::npos ? read_dense_csv(in) : read_coordinate(in);
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in = open(path);
  return read_matrix_csv(in);
}

void write_coordinate(std::ostream& out, const ObservedMatrix& m) {
  out << m.n1() << ' ' << m.n2() << '\n';
  const auto& e = m.pattern().entries();
  for (std::size_t k = 0; k < e.size(); ++k)
    out << e[k].row + 1 << ' ' << e[k].col + 1 << ' ' << format_number(m.values()[k]) << '\n';
}

void write_coordinate(std::ostream& out, const ObservationPattern& p) {
  out << p.n1() << ' ' << p.n2() << '\n';
  for (const auto& [i, j] : p.entries()) out << i + 1 << ' ' << j + 1 << '\n';
}

void write_matrix_csv(std::ostream& out, const Matrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << format_number(a(i, j));
    }
    out << '\n';
  }
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace lrmc
