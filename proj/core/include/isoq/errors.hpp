// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isoq/syntax.hpp"

namespace isoq {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::vector<std::string> expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
  std::string found_;
};

enum class ErrorCode {
  NonLinearVar,
  UnboundVar,
  TypeMismatch,
  OverlappingClauses,
  NonExhaustive,
  NonUnitary,
  NotStructurallyRecursive,
  ArityMismatch,
  IllFormedLet,
};

std::string_view error_code_name(ErrorCode code);

class TypeError : public std::runtime_error {
 public:
  TypeError(ErrorCode code, std::string message, Span span = {});

  ErrorCode code() const { return code_; }
  Span span() const { return span_; }
  const std::string& message() const { return message_; }

  /// Declaration being checked, filled in by the program-level checker.
  const std::string& declaration() const { return decl_; }
  void set_declaration(std::string decl) { decl_ = std::move(decl); }

  /// NonExhaustive: an uncovered value. OverlappingClauses: the two patterns.
  ValuePtr witness;
  ValuePtr other;
  TypePtr witness_type;
  double deviation = 0.0;  // NonUnitary

 private:
  ErrorCode code_;
  std::string message_;
  Span span_;
  std::string decl_;
};

class EvalError : public std::runtime_error {
 public:
  enum class Kind { FuelExhausted, StuckTerm, NotClassical, UnboundVariable };

  EvalError(Kind kind, const std::string& message);

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// dim() of a type containing a list.
class InfiniteTypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Block decomposition requested for a type without a list.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isoq
