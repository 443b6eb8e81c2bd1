// SPDX-License-Identifier: Apache-2.0
#include "isoq/syntax.hpp"

#include <stdexcept>

namespace isoq {

// ---------------------------------------------------------------------------
// Types

TypePtr ValueType::unit() {
  static const TypePtr u = std::make_shared<ValueType>(ValueType{Kind::Unit, nullptr, nullptr, {}});
  return u;
}

TypePtr ValueType::sum(TypePtr a, TypePtr b) {
  return std::make_shared<ValueType>(ValueType{Kind::Sum, std::move(a), std::move(b), {}});
}

TypePtr ValueType::product(TypePtr a, TypePtr b) {
  return std::make_shared<ValueType>(ValueType{Kind::Product, std::move(a), std::move(b), {}});
}

TypePtr ValueType::list(TypePtr elem) {
  return std::make_shared<ValueType>(ValueType{Kind::List, std::move(elem), nullptr, {}});
}

TypePtr ValueType::var(std::string name) {
  return std::make_shared<ValueType>(ValueType{Kind::Var, nullptr, nullptr, std::move(name)});
}

TypePtr ValueType::boolean() {
  static const TypePtr b = sum(unit(), unit());
  return b;
}

bool is_finite(const ValueType& t) {
  switch (t.kind) {
    case ValueType::Kind::Unit:
    case ValueType::Kind::Var:
      return true;
    case ValueType::Kind::List:
      return false;
    default:
      return is_finite(*t.left) && is_finite(*t.right);
  }
}

bool type_equal(const ValueType& a, const ValueType& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ValueType::Kind::Unit:
      return true;
    case ValueType::Kind::Var:
      return a.name == b.name;
    case ValueType::Kind::List:
      return type_equal(*a.left, *b.left);
    default:
      return type_equal(*a.left, *b.left) && type_equal(*a.right, *b.right);
  }
}

bool is_boolean(const ValueType& t) {
  return t.kind == ValueType::Kind::Sum && t.left->kind == ValueType::Kind::Unit &&
         t.right->kind == ValueType::Kind::Unit;
}

TypePtr unfold_list(const TypePtr& t) {
  if (t->kind != ValueType::Kind::List) return t;
  return ValueType::sum(ValueType::unit(), ValueType::product(t->left, t));
}

IsoTypePtr IsoType::base(TypePtr from, TypePtr to) {
  auto t = std::make_shared<IsoType>();
  t->kind = Kind::Base;
  t->from = std::move(from);
  t->to = std::move(to);
  return t;
}

IsoTypePtr IsoType::arrow(IsoTypePtr arg, IsoTypePtr result) {
  if (!arg || arg->kind != Kind::Base) throw std::invalid_argument("arrow argument must be a base iso type");
  auto t = std::make_shared<IsoType>();
  t->kind = Kind::Arrow;
  t->arg = std::move(arg);
  t->result = std::move(result);
  return t;
}

bool iso_type_equal(const IsoType& a, const IsoType& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == IsoType::Kind::Base) return type_equal(*a.from, *b.from) && type_equal(*a.to, *b.to);
  return iso_type_equal(*a.arg, *b.arg) && iso_type_equal(*a.result, *b.result);
}

IsoTypePtr final_base(const IsoTypePtr& t) {
  IsoTypePtr cur = t;
  while (cur->kind == IsoType::Kind::Arrow) cur = cur->result;
  return cur;
}

// ---------------------------------------------------------------------------
// Values

namespace {

ValuePtr make_value(Value::Kind kind, std::string name, ValuePtr a, ValuePtr b, Span span) {
  auto v = std::make_shared<Value>();
  v->kind = kind;
  v->name = std::move(name);
  v->first = std::move(a);
  v->second = std::move(b);
  v->span = span;
  return v;
}

}  // namespace

ValuePtr Value::unit(Span span) { return make_value(Kind::Unit, {}, nullptr, nullptr, span); }
ValuePtr Value::var(std::string name, Span span) {
  return make_value(Kind::Var, std::move(name), nullptr, nullptr, span);
}
ValuePtr Value::inl(ValuePtr v, Span span) { return make_value(Kind::InL, {}, std::move(v), nullptr, span); }
ValuePtr Value::inr(ValuePtr v, Span span) { return make_value(Kind::InR, {}, std::move(v), nullptr, span); }
ValuePtr Value::pair(ValuePtr a, ValuePtr b, Span span) {
  return make_value(Kind::Pair, {}, std::move(a), std::move(b), span);
}

ValuePtr Value::tt() { return inl(unit()); }
ValuePtr Value::ff() { return inr(unit()); }
ValuePtr Value::nil() { return inl(unit()); }
ValuePtr Value::cons(ValuePtr head, ValuePtr tail) { return inr(pair(std::move(head), std::move(tail))); }

ValuePtr Value::list(const std::vector<ValuePtr>& elems) {
  ValuePtr out = nil();
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) out = cons(*it, out);
  return out;
}

bool is_closed(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Unit:
      return true;
    case Value::Kind::Var:
      return false;
    case Value::Kind::InL:
    case Value::Kind::InR:
      return is_closed(*v.first);
    case Value::Kind::Pair:
      return is_closed(*v.first) && is_closed(*v.second);
  }
  return false;
}

bool is_product(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Unit:
    case Value::Kind::Var:
      return true;
    case Value::Kind::Pair:
      return is_product(*v.first) && is_product(*v.second);
    default:
      return false;
  }
}

std::size_t value_size(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Unit:
    case Value::Kind::Var:
      return 1;
    case Value::Kind::InL:
    case Value::Kind::InR:
      return 1 + value_size(*v.first);
    case Value::Kind::Pair:
      return 1 + value_size(*v.first) + value_size(*v.second);
  }
  return 0;
}

namespace {

int kind_rank(Value::Kind k) {
  switch (k) {
    case Value::Kind::Unit:
      return 0;
    case Value::Kind::InL:
      return 1;
    case Value::Kind::InR:
      return 2;
    case Value::Kind::Pair:
      return 3;
    case Value::Kind::Var:
      return 4;
  }
  return 5;
}

}  // namespace

std::strong_ordering canonical_compare(const Value& a, const Value& b) {
  if (&a == &b) return std::strong_ordering::equal;
  if (a.kind != b.kind) return kind_rank(a.kind) <=> kind_rank(b.kind);
  switch (a.kind) {
    case Value::Kind::Unit:
      return std::strong_ordering::equal;
    case Value::Kind::Var:
      return a.name <=> b.name;
    case Value::Kind::InL:
    case Value::Kind::InR:
      return canonical_compare(*a.first, *b.first);
    case Value::Kind::Pair: {
      auto c = canonical_compare(*a.first, *b.first);
      if (c != 0) return c;
      return canonical_compare(*a.second, *b.second);
    }
  }
  return std::strong_ordering::equal;
}

bool value_equal(const Value& a, const Value& b) { return canonical_compare(a, b) == 0; }

namespace {

void collect_vars(const Value& v, std::vector<std::string>& out) {
  switch (v.kind) {
    case Value::Kind::Var:
      out.push_back(v.name);
      break;
    case Value::Kind::InL:
    case Value::Kind::InR:
      collect_vars(*v.first, out);
      break;
    case Value::Kind::Pair:
      collect_vars(*v.first, out);
      collect_vars(*v.second, out);
      break;
    case Value::Kind::Unit:
      break;
  }
}

}  // namespace

std::vector<std::string> value_vars(const Value& v) {
  std::vector<std::string> out;
  collect_vars(v, out);
  return out;
}

// ---------------------------------------------------------------------------
// Extended values, isos

ExtPtr ExtendedValue::value(ValuePtr v) {
  Span span = v->span;
  return combination({Summand{Amplitude(), std::move(v)}}, span);
}

ExtPtr ExtendedValue::combination(std::vector<Summand> summands, Span span) {
  if (summands.empty()) throw std::invalid_argument("empty linear combination");
  auto e = std::make_shared<ExtendedValue>();
  e->kind = Kind::Combo;
  e->combo = std::move(summands);
  e->span = span;
  return e;
}

ExtPtr ExtendedValue::let(ValuePtr pattern, IsoPtr iso, ValuePtr argument, ExtPtr body, Span span) {
  auto e = std::make_shared<ExtendedValue>();
  e->kind = Kind::Let;
  e->pattern = std::move(pattern);
  e->iso = std::move(iso);
  e->argument = std::move(argument);
  e->body = std::move(body);
  e->span = span;
  return e;
}

bool ExtendedValue::is_pure() const {
  return kind == Kind::Combo && combo.size() == 1 && combo.front().amplitude.is_literal_one();
}

namespace {

std::shared_ptr<IsoExpr> make_iso(IsoExpr::Kind kind, Span span) {
  auto i = std::make_shared<IsoExpr>();
  i->kind = kind;
  i->span = span;
  return i;
}

}  // namespace

IsoPtr IsoExpr::block(std::vector<Clause> clauses, Span span) {
  if (clauses.empty()) throw std::invalid_argument("empty clause block");
  auto i = make_iso(Kind::Clauses, span);
  i->clauses = std::move(clauses);
  return i;
}

IsoPtr IsoExpr::lambda(std::string binder, IsoPtr body, Span span) {
  auto i = make_iso(Kind::Lambda, span);
  i->name = std::move(binder);
  i->body = std::move(body);
  return i;
}

IsoPtr IsoExpr::fix(std::string binder, IsoPtr body, Span span) {
  auto i = make_iso(Kind::Fix, span);
  i->name = std::move(binder);
  i->body = std::move(body);
  return i;
}

IsoPtr IsoExpr::var(std::string name, Span span) {
  auto i = make_iso(Kind::Var, span);
  i->name = std::move(name);
  return i;
}

IsoPtr IsoExpr::app(IsoPtr fn, IsoPtr arg, Span span) {
  auto i = make_iso(Kind::App, span);
  i->fn = std::move(fn);
  i->arg = std::move(arg);
  return i;
}

IsoPtr IsoExpr::named(std::string decl, Span span) {
  auto i = make_iso(Kind::Named, span);
  i->name = std::move(decl);
  return i;
}

// ---------------------------------------------------------------------------
// Terms

namespace {

std::shared_ptr<Term> make_term(Term::Kind kind, Span span) {
  auto t = std::make_shared<Term>();
  t->kind = kind;
  t->span = span;
  return t;
}

}  // namespace

TermPtr Term::unit(Span span) { return make_term(Kind::Unit, span); }

TermPtr Term::var(std::string name, Span span) {
  auto t = make_term(Kind::Var, span);
  t->name = std::move(name);
  return t;
}

TermPtr Term::inl(TermPtr a, Span span) {
  auto t = make_term(Kind::InL, span);
  t->first = std::move(a);
  return t;
}

TermPtr Term::inr(TermPtr a, Span span) {
  auto t = make_term(Kind::InR, span);
  t->first = std::move(a);
  return t;
}

TermPtr Term::pair(TermPtr a, TermPtr b, Span span) {
  auto t = make_term(Kind::Pair, span);
  t->first = std::move(a);
  t->second = std::move(b);
  return t;
}

TermPtr Term::apply(IsoPtr iso, TermPtr arg, Span span) {
  auto t = make_term(Kind::IsoApp, span);
  t->iso = std::move(iso);
  t->first = std::move(arg);
  return t;
}

TermPtr Term::let(ValuePtr pattern, TermPtr bound, TermPtr body, Span span) {
  auto t = make_term(Kind::Let, span);
  t->pattern = std::move(pattern);
  t->first = std::move(bound);
  t->second = std::move(body);
  return t;
}

TermPtr Term::sum(TermPtr a, TermPtr b, Span span) {
  auto t = make_term(Kind::Sum, span);
  t->first = std::move(a);
  t->second = std::move(b);
  return t;
}

TermPtr Term::scale(Amplitude alpha, TermPtr a, Span span) {
  auto t = make_term(Kind::Scale, span);
  t->amplitude = std::move(alpha);
  t->first = std::move(a);
  return t;
}

TermPtr value_to_term(const ValuePtr& v) {
  switch (v->kind) {
    case Value::Kind::Unit:
      return Term::unit(v->span);
    case Value::Kind::Var:
      return Term::var(v->name, v->span);
    case Value::Kind::InL:
      return Term::inl(value_to_term(v->first), v->span);
    case Value::Kind::InR:
      return Term::inr(value_to_term(v->first), v->span);
    case Value::Kind::Pair:
      return Term::pair(value_to_term(v->first), value_to_term(v->second), v->span);
  }
  return nullptr;
}

TermPtr ext_to_term(const ExtPtr& e) {
  if (e->kind == ExtendedValue::Kind::Let) {
    return Term::let(e->pattern, Term::apply(e->iso, value_to_term(e->argument), e->span),
                     ext_to_term(e->body), e->span);
  }
  if (e->is_pure()) return value_to_term(e->combo.front().value);
  TermPtr out;
  for (const auto& s : e->combo) {
    auto scaled = Term::scale(s.amplitude, value_to_term(s.value), s.value->span);
    out = out ? Term::sum(out, scaled, e->span) : scaled;
  }
  return out;
}

namespace {

std::optional<ValuePtr> as_value(const TermPtr& t, bool require_closed) {
  switch (t->kind) {
    case Term::Kind::Unit:
      return Value::unit(t->span);
    case Term::Kind::Var:
      if (require_closed) return std::nullopt;
      return Value::var(t->name, t->span);
    case Term::Kind::InL:
    case Term::Kind::InR: {
      auto inner = as_value(t->first, require_closed);
      if (!inner) return std::nullopt;
      return t->kind == Term::Kind::InL ? Value::inl(*inner, t->span) : Value::inr(*inner, t->span);
    }
    case Term::Kind::Pair: {
      auto a = as_value(t->first, require_closed);
      if (!a) return std::nullopt;
      auto b = as_value(t->second, require_closed);
      if (!b) return std::nullopt;
      return Value::pair(*a, *b, t->span);
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<ValuePtr> term_as_value(const TermPtr& t) { return as_value(t, false); }

std::optional<ValuePtr> term_as_closed_value(const TermPtr& t) { return as_value(t, true); }

const Declaration* Program::find(std::string_view name) const {
  for (const auto& d : decls) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Free variables

std::set<std::string> free_value_vars(const Value& v) {
  auto vars = value_vars(v);
  return {vars.begin(), vars.end()};
}

std::set<std::string> free_value_vars(const ExtendedValue& e) {
  if (e.kind == ExtendedValue::Kind::Combo) {
    std::set<std::string> out;
    for (const auto& s : e.combo) {
      for (auto& x : value_vars(*s.value)) out.insert(x);
    }
    return out;
  }
  auto out = free_value_vars(*e.argument);
  auto body = free_value_vars(*e.body);
  for (auto& x : value_vars(*e.pattern)) body.erase(x);
  out.insert(body.begin(), body.end());
  return out;
}

std::set<std::string> free_value_vars(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Unit:
      return {};
    case Term::Kind::Var:
      return {t.name};
    case Term::Kind::InL:
    case Term::Kind::InR:
    case Term::Kind::Scale:
    case Term::Kind::IsoApp:
      return free_value_vars(*t.first);
    case Term::Kind::Pair:
    case Term::Kind::Sum: {
      auto out = free_value_vars(*t.first);
      auto rhs = free_value_vars(*t.second);
      out.insert(rhs.begin(), rhs.end());
      return out;
    }
    case Term::Kind::Let: {
      auto out = free_value_vars(*t.first);
      auto body = free_value_vars(*t.second);
      for (auto& x : value_vars(*t.pattern)) body.erase(x);
      out.insert(body.begin(), body.end());
      return out;
    }
  }
  return {};
}

namespace {

void iso_vars_ext(const ExtendedValue& e, std::set<std::string>& out);

void iso_vars(const IsoExpr& iso, std::set<std::string>& out) {
  switch (iso.kind) {
    case IsoExpr::Kind::Var:
      out.insert(iso.name);
      break;
    case IsoExpr::Kind::Named:
      break;
    case IsoExpr::Kind::Lambda:
    case IsoExpr::Kind::Fix: {
      std::set<std::string> inner;
      iso_vars(*iso.body, inner);
      inner.erase(iso.name);
      out.insert(inner.begin(), inner.end());
      break;
    }
    case IsoExpr::Kind::App:
      iso_vars(*iso.fn, out);
      iso_vars(*iso.arg, out);
      break;
    case IsoExpr::Kind::Clauses:
      for (const auto& c : iso.clauses) iso_vars_ext(*c.rhs, out);
      break;
  }
}

void iso_vars_ext(const ExtendedValue& e, std::set<std::string>& out) {
  const ExtendedValue* cur = &e;
  while (cur->kind == ExtendedValue::Kind::Let) {
    iso_vars(*cur->iso, out);
    cur = cur->body.get();
  }
}

void named_refs_ext(const ExtendedValue& e, std::set<std::string>& out);

void named_refs(const IsoExpr& iso, std::set<std::string>& out) {
  switch (iso.kind) {
    case IsoExpr::Kind::Named:
      out.insert(iso.name);
      break;
    case IsoExpr::Kind::Var:
      break;
    case IsoExpr::Kind::Lambda:
    case IsoExpr::Kind::Fix:
      named_refs(*iso.body, out);
      break;
    case IsoExpr::Kind::App:
      named_refs(*iso.fn, out);
      named_refs(*iso.arg, out);
      break;
    case IsoExpr::Kind::Clauses:
      for (const auto& c : iso.clauses) named_refs_ext(*c.rhs, out);
      break;
  }
}

void named_refs_ext(const ExtendedValue& e, std::set<std::string>& out) {
  const ExtendedValue* cur = &e;
  while (cur->kind == ExtendedValue::Kind::Let) {
    named_refs(*cur->iso, out);
    cur = cur->body.get();
  }
}

}  // namespace

std::set<std::string> free_iso_vars(const IsoExpr& iso) {
  std::set<std::string> out;
  iso_vars(iso, out);
  return out;
}

std::set<std::string> referenced_declarations(const IsoExpr& iso) {
  std::set<std::string> out;
  named_refs(iso, out);
  return out;
}

const ExtendedValue& bottom_value(const ExtendedValue& e) {
  const ExtendedValue* cur = &e;
  while (cur->kind == ExtendedValue::Kind::Let) cur = cur->body.get();
  return *cur;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence: both sides are renamed to binding-order indices.

namespace {

struct AlphaEnv {
  std::map<std::string, int> left;
  std::map<std::string, int> right;
  std::map<std::string, int> iso_left;
  std::map<std::string, int> iso_right;
  int next = 0;
  bool free_bijection = false;  // standalone comparisons treat free names as binders
};

bool bind_pattern(AlphaEnv& env, const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Unit:
      return true;
    case Value::Kind::Var: {
      int id = env.next++;
      env.left[a.name] = id;
      env.right[b.name] = id;
      return true;
    }
    case Value::Kind::InL:
    case Value::Kind::InR:
      return bind_pattern(env, *a.first, *b.first);
    case Value::Kind::Pair:
      return bind_pattern(env, *a.first, *b.first) && bind_pattern(env, *a.second, *b.second);
  }
  return false;
}

bool use_name(AlphaEnv& env, const std::string& a, const std::string& b) {
  auto la = env.left.find(a);
  auto rb = env.right.find(b);
  if (la == env.left.end() && rb == env.right.end()) {
    if (env.free_bijection) {
      int id = env.next++;
      env.left[a] = id;
      env.right[b] = id;
      return true;
    }
    return a == b;
  }
  if (la == env.left.end() || rb == env.right.end()) return false;
  return la->second == rb->second;
}

bool use_value(AlphaEnv& env, const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Unit:
      return true;
    case Value::Kind::Var:
      return use_name(env, a.name, b.name);
    case Value::Kind::InL:
    case Value::Kind::InR:
      return use_value(env, *a.first, *b.first);
    case Value::Kind::Pair:
      return use_value(env, *a.first, *b.first) && use_value(env, *a.second, *b.second);
  }
  return false;
}

bool alpha_iso(AlphaEnv env, const IsoExpr& a, const IsoExpr& b);

bool alpha_ext(AlphaEnv& env, const ExtendedValue& a, const ExtendedValue& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ExtendedValue::Kind::Let) {
    if (!alpha_iso(env, *a.iso, *b.iso)) return false;
    if (!use_value(env, *a.argument, *b.argument)) return false;
    if (!bind_pattern(env, *a.pattern, *b.pattern)) return false;
    return alpha_ext(env, *a.body, *b.body);
  }
  if (a.combo.size() != b.combo.size()) return false;
  for (std::size_t i = 0; i < a.combo.size(); ++i) {
    if (!a.combo[i].amplitude.structurally_equal(b.combo[i].amplitude)) return false;
    if (!use_value(env, *a.combo[i].value, *b.combo[i].value)) return false;
  }
  return true;
}

bool alpha_iso(AlphaEnv env, const IsoExpr& a, const IsoExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case IsoExpr::Kind::Clauses:
      if (a.clauses.size() != b.clauses.size()) return false;
      for (std::size_t i = 0; i < a.clauses.size(); ++i) {
        AlphaEnv scope = env;
        scope.free_bijection = false;
        if (!bind_pattern(scope, *a.clauses[i].lhs, *b.clauses[i].lhs)) return false;
        if (!alpha_ext(scope, *a.clauses[i].rhs, *b.clauses[i].rhs)) return false;
      }
      return true;
    case IsoExpr::Kind::Lambda:
    case IsoExpr::Kind::Fix: {
      int id = env.next++;
      env.iso_left[a.name] = id;
      env.iso_right[b.name] = id;
      return alpha_iso(env, *a.body, *b.body);
    }
    case IsoExpr::Kind::Var: {
      auto la = env.iso_left.find(a.name);
      auto rb = env.iso_right.find(b.name);
      if (la == env.iso_left.end() && rb == env.iso_right.end()) return a.name == b.name;
      if (la == env.iso_left.end() || rb == env.iso_right.end()) return false;
      return la->second == rb->second;
    }
    case IsoExpr::Kind::App:
      return alpha_iso(env, *a.fn, *b.fn) && alpha_iso(env, *a.arg, *b.arg);
    case IsoExpr::Kind::Named:
      return a.name == b.name;
  }
  return false;
}

bool alpha_term(AlphaEnv env, const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::Unit:
      return true;
    case Term::Kind::Var:
      return use_name(env, a.name, b.name);
    case Term::Kind::InL:
    case Term::Kind::InR:
      return alpha_term(env, *a.first, *b.first);
    case Term::Kind::Pair:
    case Term::Kind::Sum:
      return alpha_term(env, *a.first, *b.first) && alpha_term(env, *a.second, *b.second);
    case Term::Kind::Scale:
      return a.amplitude.structurally_equal(b.amplitude) && alpha_term(env, *a.first, *b.first);
    case Term::Kind::IsoApp:
      return alpha_iso(env, *a.iso, *b.iso) && alpha_term(env, *a.first, *b.first);
    case Term::Kind::Let: {
      if (!alpha_term(env, *a.first, *b.first)) return false;
      if (!bind_pattern(env, *a.pattern, *b.pattern)) return false;
      return alpha_term(env, *a.second, *b.second);
    }
  }
  return false;
}

}  // namespace

bool alpha_equivalent(const Value& a, const Value& b) {
  AlphaEnv env;
  env.free_bijection = true;
  return use_value(env, a, b);
}

bool alpha_equivalent(const ExtendedValue& a, const ExtendedValue& b) {
  AlphaEnv env;
  env.free_bijection = true;
  return alpha_ext(env, a, b);
}

bool alpha_equivalent(const IsoExpr& a, const IsoExpr& b) { return alpha_iso(AlphaEnv{}, a, b); }

bool alpha_equivalent(const Term& a, const Term& b) { return alpha_term(AlphaEnv{}, a, b); }

bool alpha_equivalent(const Program& a, const Program& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (std::size_t i = 0; i < a.decls.size(); ++i) {
    const auto& x = a.decls[i];
    const auto& y = b.decls[i];
    if (x.name != y.name || !iso_type_equal(*x.type, *y.type)) return false;
    if (!alpha_equivalent(*x.body, *y.body)) return false;
  }
  return true;
}

}  // namespace isoq
