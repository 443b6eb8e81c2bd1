// SPDX-License-Identifier: Apache-2.0
#include "isoq/amplitude.hpp"

#include <cmath>
#include <stdexcept>

namespace isoq {

struct Amplitude::Node {
  Kind kind = Kind::Integer;
  std::int64_t value = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
  std::complex<double> cached;
};

Amplitude::Amplitude() : Amplitude(integer(1)) {}

Amplitude::Amplitude(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Amplitude Amplitude::integer(std::int64_t n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Integer;
  node->value = n;
  node->cached = {static_cast<double>(n), 0.0};
  return Amplitude(std::move(node));
}

Amplitude Amplitude::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den == 1) return integer(num);
  return integer(num) / integer(den);
}

Amplitude Amplitude::imag() {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Imag;
  node->cached = {0.0, 1.0};
  return Amplitude(std::move(node));
}

Amplitude Amplitude::sqrt(const Amplitude& radicand) {
  auto r = radicand.eval();
  if (r.imag() != 0.0 || r.real() < 0.0) {
    throw std::domain_error("sqrt of a value that is not a nonnegative real: " +
                            radicand.to_string());
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::Sqrt;
  node->a = radicand.node_;
  node->cached = {std::sqrt(r.real()), 0.0};
  return Amplitude(std::move(node));
}

Amplitude Amplitude::binary(Kind kind, const Amplitude& a, const Amplitude& b,
                            std::complex<double> value) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->a = a.node_;
  node->b = b.node_;
  node->cached = value;
  return Amplitude(std::move(node));
}

Amplitude operator+(const Amplitude& a, const Amplitude& b) {
  return Amplitude::binary(Amplitude::Kind::Add, a, b, a.eval() + b.eval());
}

Amplitude operator-(const Amplitude& a, const Amplitude& b) {
  return Amplitude::binary(Amplitude::Kind::Sub, a, b, a.eval() - b.eval());
}

Amplitude operator*(const Amplitude& a, const Amplitude& b) {
  return Amplitude::binary(Amplitude::Kind::Mul, a, b, a.eval() * b.eval());
}

Amplitude operator/(const Amplitude& a, const Amplitude& b) {
  auto d = b.eval();
  if (d == std::complex<double>(0.0, 0.0)) throw std::domain_error("division by zero amplitude");
  return Amplitude::binary(Amplitude::Kind::Div, a, b, a.eval() / d);
}

Amplitude Amplitude::operator-() const {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Neg;
  node->a = node_;
  node->cached = -node_->cached;
  return Amplitude(std::move(node));
}

Amplitude::Kind Amplitude::kind() const { return node_->kind; }

std::int64_t Amplitude::integer_value() const { return node_->value; }

Amplitude Amplitude::lhs() const { return Amplitude(node_->a); }

Amplitude Amplitude::rhs() const { return Amplitude(node_->b); }

std::complex<double> Amplitude::eval() const { return node_->cached; }

Amplitude Amplitude::conj() const {
  switch (node_->kind) {
    case Kind::Integer:
    case Kind::Sqrt:  // radicand is a nonnegative real
      return *this;
    case Kind::Imag:
      return -*this;
    case Kind::Neg:
      return -Amplitude(node_->a).conj();
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      auto l = Amplitude(node_->a).conj();
      auto r = Amplitude(node_->b).conj();
      return binary(node_->kind, l, r, std::conj(node_->cached));
    }
  }
  return *this;
}

bool Amplitude::is_literal_one() const {
  return node_->kind == Kind::Integer && node_->value == 1;
}

namespace {

int precedence(Amplitude::Kind k) {
  switch (k) {
    case Amplitude::Kind::Add:
    case Amplitude::Kind::Sub:
      return 1;
    case Amplitude::Kind::Mul:
    case Amplitude::Kind::Div:
      return 2;
    case Amplitude::Kind::Neg:
      return 3;
    default:
      return 4;
  }
}

}  // namespace

std::string Amplitude::to_string(bool atomic) const {
  const auto& n = *node_;
  std::string out;
  switch (n.kind) {
    case Kind::Integer:
      out = std::to_string(n.value);
      if (n.value < 0) return "(" + out + ")";
      return out;
    case Kind::Imag:
      return "i";
    case Kind::Sqrt:
      return "sqrt(" + Amplitude(n.a).to_string() + ")";
    case Kind::Neg: {
      Amplitude inner(n.a);
      // "--" would open a comment, so nested negations keep parens.
      bool wrap = precedence(inner.kind()) <= 3;
      out = "-" + inner.to_string(wrap);
      break;
    }
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      Amplitude l(n.a);
      Amplitude r(n.b);
      int p = precedence(n.kind);
      bool wrap_l = precedence(l.kind()) < p;
      // Right operand of - and / (and of equal precedence generally) keeps parens.
      bool wrap_r = precedence(r.kind()) <= p;
      const char* op = n.kind == Kind::Add   ? " + "
                       : n.kind == Kind::Sub ? " - "
                       : n.kind == Kind::Mul ? "*"
                                             : "/";
      out = l.to_string(wrap_l) + op + r.to_string(wrap_r);
      break;
    }
  }
  return atomic ? "(" + out + ")" : out;
}

bool Amplitude::structurally_equal(const Amplitude& other) const {
  const Node* x = node_.get();
  const Node* y = other.node_.get();
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Kind::Integer:
      return x->value == y->value;
    case Kind::Imag:
      return true;
    case Kind::Sqrt:
    case Kind::Neg:
      return Amplitude(x->a).structurally_equal(Amplitude(y->a));
    default:
      return Amplitude(x->a).structurally_equal(Amplitude(y->a)) &&
             Amplitude(x->b).structurally_equal(Amplitude(y->b));
  }
}

bool numerically_equal(const Amplitude& a, const Amplitude& b, double tol) {
  return std::abs(a.eval() - b.eval()) < tol;
}

}  // namespace isoq
