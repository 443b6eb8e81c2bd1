// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>

namespace isoq {

/// Exact scalar expression: integers, rational division, square roots,
/// the imaginary unit and ring operations. Evaluated lazily to a
/// complex double.
class Amplitude {
 public:
  enum class Kind { Integer, Imag, Sqrt, Neg, Add, Sub, Mul, Div };

  Amplitude();  // the literal 1

  static Amplitude integer(std::int64_t n);
  static Amplitude rational(std::int64_t num, std::int64_t den);
  static Amplitude imag();
  static Amplitude sqrt(const Amplitude& radicand);

  friend Amplitude operator+(const Amplitude& a, const Amplitude& b);
  friend Amplitude operator-(const Amplitude& a, const Amplitude& b);
  friend Amplitude operator*(const Amplitude& a, const Amplitude& b);
  friend Amplitude operator/(const Amplitude& a, const Amplitude& b);
  Amplitude operator-() const;

  Kind kind() const;
  std::int64_t integer_value() const;  // only for Kind::Integer
  Amplitude lhs() const;  // unary payload or left operand
  Amplitude rhs() const;

  std::complex<double> eval() const;

  /// Symbolic complex conjugate (i -> -i).
  Amplitude conj() const;

  /// True iff this is syntactically the integer literal 1.
  bool is_literal_one() const;

  /// Parseable rendering; `atomic` forces parentheses around compound forms.
  std::string to_string(bool atomic = false) const;

  bool structurally_equal(const Amplitude& other) const;

 private:
  struct Node;
  explicit Amplitude(std::shared_ptr<const Node> node);
  static Amplitude binary(Kind kind, const Amplitude& a, const Amplitude& b,
                          std::complex<double> value);
  std::shared_ptr<const Node> node_;
};

/// |a - b| < 1e-12 after evaluation.
bool numerically_equal(const Amplitude& a, const Amplitude& b, double tol = 1e-12);

}  // namespace isoq
