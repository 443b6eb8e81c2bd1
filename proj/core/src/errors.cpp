// SPDX-License-Identifier: Apache-2.0
#include "isoq/errors.hpp"

namespace isoq {

namespace {

std::string parse_message(int line, int column, const std::vector<std::string>& expected,
                          const std::string& found) {
  std::string out = std::to_string(line) + ":" + std::to_string(column) + ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  if (expected.empty()) out += "something else";
  return out + ", found " + found;
}

}  // namespace

ParseError::ParseError(int line, int column, std::vector<std::string> expected, std::string found)
    : std::runtime_error(parse_message(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonLinearVar:
      return "NonLinearVar";
    case ErrorCode::UnboundVar:
      return "UnboundVar";
    case ErrorCode::TypeMismatch:
      return "TypeMismatch";
    case ErrorCode::OverlappingClauses:
      return "OverlappingClauses";
    case ErrorCode::NonExhaustive:
      return "NonExhaustive";
    case ErrorCode::NonUnitary:
      return "NonUnitary";
    case ErrorCode::NotStructurallyRecursive:
      return "NotStructurallyRecursive";
    case ErrorCode::ArityMismatch:
      return "ArityMismatch";
    case ErrorCode::IllFormedLet:
      return "IllFormedLet";
  }
  return "Unknown";
}

TypeError::TypeError(ErrorCode code, std::string message, Span span)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      message_(std::move(message)),
      span_(span) {}

EvalError::EvalError(Kind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

}  // namespace isoq
