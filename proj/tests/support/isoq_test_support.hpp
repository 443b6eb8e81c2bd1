// SPDX-License-Identifier: Apache-2.0
// Shared helpers and independent oracles for the unit and acceptance tests.
// The oracles never call into the evaluator or the denotation module.
#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isoq/parser.hpp"
#include "isoq/syntax.hpp"

namespace isoq::testing {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_path(const std::string& name) { return std::string(ISOQ_FIXTURES_DIR) + "/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(ISOQ_GOLDEN_DIR) + "/" + name; }

inline const Program& stdlib() {
  static const Program p = parse_program(read_text(ISOQ_STDLIB_PATH));
  return p;
}

inline Program fixture(const std::string& name) { return parse_program(read_text(fixture_path(name))); }

using Dense = std::vector<std::vector<std::complex<double>>>;

/// H^{(x)l} by explicit tensor products, basis index bit k (msb first) = 1
/// meaning the k-th list element is ff.
inline Dense hadamard_power(std::size_t l) {
  const double s = 1.0 / std::sqrt(2.0);
  Dense h = {{s, s}, {s, -s}};
  Dense out = {{1.0}};
  for (std::size_t k = 0; k < l; ++k) {
    Dense next(out.size() * 2, std::vector<std::complex<double>>(out.size() * 2));
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < out.size(); ++j) {
        for (std::size_t a = 0; a < 2; ++a) {
          for (std::size_t b = 0; b < 2; ++b) next[i * 2 + a][j * 2 + b] = out[i][j] * h[a][b];
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Target flips iff every control is tt.
inline bool cnotstar_oracle(const std::vector<bool>& controls, bool target) {
  bool all = true;
  for (bool c : controls) all = all && c;
  return target != all;
}

/// Boolean list literal, true = tt.
inline std::string bool_list(const std::vector<bool>& bits) {
  std::string out = "[";
  for (std::size_t i = 0; i < bits.size(); ++i) out += std::string(i ? ", " : "") + (bits[i] ? "tt" : "ff");
  return out + "]";
}

struct CsvEntry {
  std::string row;
  std::string column;
  std::complex<double> value;
};

/// Reads row,column,re,im with quoted labels; '#' lines are comments.
inline std::vector<CsvEntry> read_matrix_csv(const std::string& text) {
  std::vector<CsvEntry> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (c == '"') {
        if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = !quoted;
        }
      } else if (c == ',' && !quoted) {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    if (fields.size() != 4) throw std::runtime_error("bad csv line: " + line);
    out.push_back({fields[0], fields[1], {std::stod(fields[2]), std::stod(fields[3])}});
  }
  return out;
}

}  // namespace isoq::testing
