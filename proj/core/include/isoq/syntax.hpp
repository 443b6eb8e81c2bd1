// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "isoq/amplitude.hpp"

namespace isoq {

struct Span {
  int line = 0;
  int column = 0;
};

// ---------------------------------------------------------------------------
// Types

struct ValueType;
using TypePtr = std::shared_ptr<const ValueType>;

/// 1 | a + b | a * b | [a], plus named atoms used for polymorphic
/// declarations (and unification variables inside the checker).
struct ValueType {
  enum class Kind { Unit, Sum, Product, List, Var };

  Kind kind = Kind::Unit;
  TypePtr left;   // Sum/Product left operand, List element
  TypePtr right;  // Sum/Product right operand
  std::string name;

  static TypePtr unit();
  static TypePtr sum(TypePtr a, TypePtr b);
  static TypePtr product(TypePtr a, TypePtr b);
  static TypePtr list(TypePtr elem);
  static TypePtr var(std::string name);
  static TypePtr boolean();
};

bool is_finite(const ValueType& t);
bool type_equal(const ValueType& a, const ValueType& b);
bool is_boolean(const ValueType& t);

/// [a] is 1 + (a * [a]); other types are returned unchanged.
TypePtr unfold_list(const TypePtr& t);

struct IsoType;
using IsoTypePtr = std::shared_ptr<const IsoType>;

/// a <-> b | (a <-> b) -> T
struct IsoType {
  enum class Kind { Base, Arrow };

  Kind kind = Kind::Base;
  TypePtr from;        // Base
  TypePtr to;          // Base
  IsoTypePtr arg;      // Arrow: always a Base
  IsoTypePtr result;   // Arrow

  static IsoTypePtr base(TypePtr from, TypePtr to);
  static IsoTypePtr arrow(IsoTypePtr arg, IsoTypePtr result);
};

bool iso_type_equal(const IsoType& a, const IsoType& b);

/// Innermost a <-> b of an arrow chain.
IsoTypePtr final_base(const IsoTypePtr& t);

// ---------------------------------------------------------------------------
// Values and patterns

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct Value {
  enum class Kind { Unit, Var, InL, InR, Pair };

  Kind kind = Kind::Unit;
  std::string name;  // Var
  ValuePtr first;    // InL/InR payload, Pair left
  ValuePtr second;   // Pair right
  Span span;

  static ValuePtr unit(Span span = {});
  static ValuePtr var(std::string name, Span span = {});
  static ValuePtr inl(ValuePtr v, Span span = {});
  static ValuePtr inr(ValuePtr v, Span span = {});
  static ValuePtr pair(ValuePtr a, ValuePtr b, Span span = {});

  // Sugar; desugared on construction.
  static ValuePtr tt();
  static ValuePtr ff();
  static ValuePtr nil();
  static ValuePtr cons(ValuePtr head, ValuePtr tail);
  static ValuePtr list(const std::vector<ValuePtr>& elems);
};

bool is_closed(const Value& v);

/// () | x | (p, p)
bool is_product(const Value& v);

/// Constructor count: Unit = 1, InL/InR = 1 + payload, Pair = 1 + both.
std::size_t value_size(const Value& v);

/// Total order on closed values: () < inl _ < inr _, pairs lexicographic.
/// Variables (only in open values) sort after every constructor, by name.
std::strong_ordering canonical_compare(const Value& a, const Value& b);

struct CanonicalLess {
  bool operator()(const ValuePtr& a, const ValuePtr& b) const {
    return canonical_compare(*a, *b) < 0;
  }
};

bool value_equal(const Value& a, const Value& b);

/// Variables in left-to-right order of occurrence.
std::vector<std::string> value_vars(const Value& v);

// ---------------------------------------------------------------------------
// Isos and extended values

struct IsoExpr;
using IsoPtr = std::shared_ptr<const IsoExpr>;
struct ExtendedValue;
using ExtPtr = std::shared_ptr<const ExtendedValue>;

struct Summand {
  Amplitude amplitude;
  ValuePtr value;
};

/// Either a linear combination of pure values, or
/// `let pattern = iso argument in body`.
struct ExtendedValue {
  enum class Kind { Combo, Let };

  Kind kind = Kind::Combo;
  std::vector<Summand> combo;
  ValuePtr pattern;
  IsoPtr iso;
  ValuePtr argument;
  ExtPtr body;
  Span span;

  static ExtPtr value(ValuePtr v);
  static ExtPtr combination(std::vector<Summand> summands, Span span = {});
  static ExtPtr let(ValuePtr pattern, IsoPtr iso, ValuePtr argument, ExtPtr body, Span span = {});

  /// Single summand with the literal amplitude 1.
  bool is_pure() const;
};

struct Clause {
  ValuePtr lhs;
  ExtPtr rhs;
  Span span;
};

struct IsoExpr {
  enum class Kind { Clauses, Lambda, Fix, Var, App, Named };

  Kind kind = Kind::Clauses;
  std::vector<Clause> clauses;
  std::string name;  // binder (Lambda/Fix), variable, or declaration name
  IsoPtr body;       // Lambda/Fix
  IsoPtr fn;         // App
  IsoPtr arg;        // App
  Span span;

  static IsoPtr block(std::vector<Clause> clauses, Span span = {});
  static IsoPtr lambda(std::string binder, IsoPtr body, Span span = {});
  static IsoPtr fix(std::string binder, IsoPtr body, Span span = {});
  static IsoPtr var(std::string name, Span span = {});
  static IsoPtr app(IsoPtr fn, IsoPtr arg, Span span = {});
  static IsoPtr named(std::string decl, Span span = {});
};

// ---------------------------------------------------------------------------
// Terms

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Unit, Var, InL, InR, Pair, IsoApp, Let, Sum, Scale };

  Kind kind = Kind::Unit;
  std::string name;  // Var
  TermPtr first;     // InL/InR payload, Pair left, IsoApp argument, Let bound term, Sum left, Scale operand
  TermPtr second;    // Pair right, Let body, Sum right
  IsoPtr iso;        // IsoApp
  ValuePtr pattern;  // Let
  Amplitude amplitude;
  Span span;

  static TermPtr unit(Span span = {});
  static TermPtr var(std::string name, Span span = {});
  static TermPtr inl(TermPtr t, Span span = {});
  static TermPtr inr(TermPtr t, Span span = {});
  static TermPtr pair(TermPtr a, TermPtr b, Span span = {});
  static TermPtr apply(IsoPtr iso, TermPtr arg, Span span = {});
  static TermPtr let(ValuePtr pattern, TermPtr bound, TermPtr body, Span span = {});
  static TermPtr sum(TermPtr a, TermPtr b, Span span = {});
  static TermPtr scale(Amplitude alpha, TermPtr t, Span span = {});
};

TermPtr value_to_term(const ValuePtr& v);

/// Extended value as a term: lets become term lets, combinations become
/// sums of scaled values (a lone amplitude-1 value stays bare).
TermPtr ext_to_term(const ExtPtr& e);

/// The value if `t` is built only from (), inl, inr, pairs and variables.
std::optional<ValuePtr> term_as_value(const TermPtr& t);

/// Like term_as_value but additionally requires no variables.
std::optional<ValuePtr> term_as_closed_value(const TermPtr& t);

// ---------------------------------------------------------------------------
// Programs

struct Declaration {
  std::string name;
  IsoTypePtr type;
  IsoPtr body;
  Span span;
};

struct Program {
  std::vector<Declaration> decls;

  const Declaration* find(std::string_view name) const;
};

// ---------------------------------------------------------------------------
// Structural utilities

std::set<std::string> free_value_vars(const Value& v);
std::set<std::string> free_value_vars(const ExtendedValue& e);
std::set<std::string> free_value_vars(const Term& t);

std::set<std::string> free_iso_vars(const IsoExpr& iso);

/// Declaration names referenced through Named nodes.
std::set<std::string> referenced_declarations(const IsoExpr& iso);

/// Val(e): the combination at the end of the let-chain.
const ExtendedValue& bottom_value(const ExtendedValue& e);

bool alpha_equivalent(const Value& a, const Value& b);
bool alpha_equivalent(const ExtendedValue& a, const ExtendedValue& b);
bool alpha_equivalent(const IsoExpr& a, const IsoExpr& b);
bool alpha_equivalent(const Term& a, const Term& b);
bool alpha_equivalent(const Program& a, const Program& b);

}  // namespace isoq
