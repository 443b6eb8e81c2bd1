// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoq/evaluator.hpp"
#include "isoq/syntax.hpp"

namespace isoq {

/// Closed values of a type with at most `bound` constructors, in
/// canonical order.
struct Basis {
  TypePtr type;
  std::size_t bound = 0;
  std::vector<ValuePtr> values;
  std::map<ValuePtr, std::size_t, CanonicalLess> index;

  std::size_t size() const { return values.size(); }
  std::optional<std::size_t> find(const ValuePtr& v) const;
};

/// Throws std::invalid_argument for types with opaque variables.
Basis enumerate_values(const TypePtr& a, std::size_t bound);

struct OverflowEntry {
  ValuePtr input;
  ValuePtr output;  // outside the output basis
  std::complex<double> amplitude;
};

/// Truncated matrix of an iso; entries are keyed (output row, input column).
struct DenotationMatrix {
  Basis in;
  Basis out;
  std::map<std::pair<std::size_t, std::size_t>, std::complex<double>> entries;
  std::vector<OverflowEntry> overflow;

  std::complex<double> at(std::size_t row, std::size_t column) const;
};

DenotationMatrix denote(const IsoPtr& iso, const TypePtr& a, const TypePtr& b, std::size_t bound,
                        const Program& program, const EvalOptions& options = {});

/// Infers a <-> b first. Throws TypeError, or std::invalid_argument when
/// the type is not closed.
DenotationMatrix denote(const IsoPtr& iso, std::size_t bound, const Program& program,
                        const EvalOptions& options = {});

struct IsometryReport {
  bool conclusive = true;          // false when the truncation leaks
  double isometry = 0.0;           // max |M*M - I|
  std::optional<double> coisometry;  // max |MM* - I| when square

  bool ok(double tol) const;
};

IsometryReport check_isometry(const DenotationMatrix& m);

struct BlockEntry {
  std::size_t length = 0;
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  double isometry = 0.0;
  std::optional<double> coisometry;
  bool surjective = false;  // square and co-isometric within tol
};

struct BlockReport {
  std::vector<int> path;      // through pairs to the head list
  double off_block = 0.0;     // largest entry between different lengths
  std::vector<BlockEntry> blocks;

  bool ok(double tol) const;
};

/// Splits both bases by the length of the first list found left to right
/// through pairs. Throws ShapeError when there is none.
BlockReport block_decompose(const DenotationMatrix& m, double tol = 1e-9);

/// Dense block of `m` for one head-list length (rows out, columns in).
std::vector<std::vector<std::complex<double>>> dense_block(const DenotationMatrix& m, const std::vector<int>& path,
                                                           std::size_t length);

/// Largest |inverse[v][w] - conj(m[w][v])| over both supports.
double adjoint_deviation(const DenotationMatrix& m, const DenotationMatrix& inverse);

std::size_t head_list_length(const Value& v, const std::vector<int>& path);

/// CSV with header row,column,re,im; zero entries omitted.
std::string matrix_to_csv(const DenotationMatrix& m);

/// JSON document tagged "schema":"isoq/1".
std::string matrix_to_json(const DenotationMatrix& m, const IsometryReport& report,
                           const std::optional<BlockReport>& blocks);

}  // namespace isoq
