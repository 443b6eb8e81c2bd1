// SPDX-License-Identifier: Apache-2.0
#include "isoq/typechecker.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>

namespace isoq {

namespace {

TypeError error_at(const TypeError& e, Span span) {
  TypeError out(e.code(), e.message(), span);
  out.witness = e.witness;
  out.witness_type = e.witness_type;
  out.other = e.other;
  out.deviation = e.deviation;
  return out;
}

std::string show(const Value& v, const TypePtr& t = nullptr) { return pretty_print(v, t); }

bool is_meta(const ValueType& t) {
  return t.kind == ValueType::Kind::Var && !t.name.empty() && t.name.front() == '?';
}

// ---------------------------------------------------------------------------
// Unification over `?n` metavariables. Lists unify with their one-step
// unfolding 1 + (a * [a]).

class Unifier {
 public:
  TypePtr fresh() { return ValueType::var("?" + std::to_string(next_++)); }

  TypePtr resolve(TypePtr t) const {
    while (is_meta(*t)) {
      auto it = subst_.find(t->name);
      if (it == subst_.end()) break;
      t = it->second;
    }
    return t;
  }

  TypePtr zonk(const TypePtr& type) const {
    auto t = resolve(type);
    switch (t->kind) {
      case ValueType::Kind::Unit:
      case ValueType::Kind::Var:
        return t;
      case ValueType::Kind::List:
        return ValueType::list(zonk(t->left));
      case ValueType::Kind::Product:
        return ValueType::product(zonk(t->left), zonk(t->right));
      case ValueType::Kind::Sum: {
        auto l = zonk(t->left);
        auto r = zonk(t->right);
        // 1 + (e * [e]) folds back to [e].
        if (l->kind == ValueType::Kind::Unit && r->kind == ValueType::Kind::Product &&
            r->right->kind == ValueType::Kind::List && type_equal(*r->left, *r->right->left)) {
          return r->right;
        }
        return ValueType::sum(l, r);
      }
    }
    return t;
  }

  IsoTypePtr zonk(const IsoTypePtr& t) const {
    if (t->kind == IsoType::Kind::Base) return IsoType::base(zonk(t->from), zonk(t->to));
    return IsoType::arrow(zonk(t->arg), zonk(t->result));
  }

  void unify(const TypePtr& x, const TypePtr& y, Span span) {
    auto a = resolve(x);
    auto b = resolve(y);
    if (a == b) return;
    if (is_meta(*a)) return bind(a->name, b, span);
    if (is_meta(*b)) return bind(b->name, a, span);
    if (a->kind == ValueType::Kind::List && b->kind == ValueType::Kind::List) {
      return unify(a->left, b->left, span);
    }
    if (a->kind == ValueType::Kind::List && b->kind == ValueType::Kind::Sum) {
      return unify(unfold_list(a), b, span);
    }
    if (a->kind == ValueType::Kind::Sum && b->kind == ValueType::Kind::List) {
      return unify(a, unfold_list(b), span);
    }
    if (a->kind != b->kind) mismatch(a, b, span);
    switch (a->kind) {
      case ValueType::Kind::Unit:
        return;
      case ValueType::Kind::Var:
        if (a->name != b->name) mismatch(a, b, span);
        return;
      default:
        unify(a->left, b->left, span);
        unify(a->right, b->right, span);
    }
  }

  void unify(const IsoTypePtr& a, const IsoTypePtr& b, Span span) {
    if (a->kind != b->kind) {
      throw TypeError(ErrorCode::TypeMismatch,
                      "expected iso type " + pretty_print(*zonk(b)) + ", found " +
                          pretty_print(*zonk(a)),
                      span);
    }
    if (a->kind == IsoType::Kind::Base) {
      unify(a->from, b->from, span);
      unify(a->to, b->to, span);
    } else {
      unify(a->arg, b->arg, span);
      unify(a->result, b->result, span);
    }
  }

  [[noreturn]] void mismatch(const TypePtr& a, const TypePtr& b, Span span) const {
    throw TypeError(ErrorCode::TypeMismatch,
                    "cannot match " + pretty_print(*zonk(a)) + " with " + pretty_print(*zonk(b)),
                    span);
  }

 private:
  bool occurs(const std::string& name, const TypePtr& type) const {
    auto t = resolve(type);
    if (is_meta(*t)) return t->name == name;
    if (t->kind == ValueType::Kind::Unit || t->kind == ValueType::Kind::Var) return false;
    if (t->kind == ValueType::Kind::List) return occurs(name, t->left);
    return occurs(name, t->left) || occurs(name, t->right);
  }

  void bind(const std::string& name, const TypePtr& t, Span span) {
    if (is_meta(*t) && t->name == name) return;
    if (occurs(name, t)) {
      // ?m = 1 + (e * ?m) is the list type [e].
      auto s = resolve(t);
      if (s->kind == ValueType::Kind::Sum && resolve(s->left)->kind == ValueType::Kind::Unit) {
        auto r = resolve(s->right);
        if (r->kind == ValueType::Kind::Product) {
          auto tail = resolve(r->right);
          if (is_meta(*tail) && tail->name == name && !occurs(name, r->left)) {
            subst_[name] = ValueType::list(r->left);
            return;
          }
        }
      }
      throw TypeError(ErrorCode::TypeMismatch, "infinite type " + name + " = " + pretty_print(*zonk(t)),
                      span);
    }
    subst_[name] = t;
  }

  std::map<std::string, TypePtr> subst_;
  int next_ = 0;
};

// Replaces type atoms by fresh metas, consistently within one reference.
TypePtr instantiate(const TypePtr& t, std::map<std::string, TypePtr>& fresh, Unifier& u) {
  switch (t->kind) {
    case ValueType::Kind::Unit:
      return t;
    case ValueType::Kind::Var: {
      auto it = fresh.find(t->name);
      if (it != fresh.end()) return it->second;
      auto m = u.fresh();
      fresh[t->name] = m;
      return m;
    }
    case ValueType::Kind::List:
      return ValueType::list(instantiate(t->left, fresh, u));
    case ValueType::Kind::Sum:
      return ValueType::sum(instantiate(t->left, fresh, u), instantiate(t->right, fresh, u));
    case ValueType::Kind::Product:
      return ValueType::product(instantiate(t->left, fresh, u), instantiate(t->right, fresh, u));
  }
  return t;
}

IsoTypePtr instantiate(const IsoTypePtr& t, std::map<std::string, TypePtr>& fresh, Unifier& u) {
  if (t->kind == IsoType::Kind::Base) {
    return IsoType::base(instantiate(t->from, fresh, u), instantiate(t->to, fresh, u));
  }
  return IsoType::arrow(instantiate(t->arg, fresh, u), instantiate(t->result, fresh, u));
}

// ---------------------------------------------------------------------------
// Exhaustiveness as usefulness of a wildcard row.

using Row = std::vector<ValuePtr>;

const ValuePtr& wildcard() {
  static const ValuePtr w = Value::var("_");
  return w;
}

TypePtr effective(const TypePtr& t) { return t->kind == ValueType::Kind::List ? unfold_list(t) : t; }

std::optional<Row> uncovered(const std::vector<Row>& rows, const std::vector<TypePtr>& types) {
  if (types.empty()) {
    if (rows.empty()) return Row{};
    return std::nullopt;
  }
  const TypePtr& head = types.front();
  std::vector<TypePtr> rest(types.begin() + 1, types.end());

  bool all_vars = std::all_of(rows.begin(), rows.end(),
                              [](const Row& r) { return r.front()->kind == Value::Kind::Var; });
  auto t = effective(head);
  if (all_vars || t->kind == ValueType::Kind::Var) {
    std::vector<Row> d;
    for (const auto& r : rows) {
      if (r.front()->kind == Value::Kind::Var) d.emplace_back(r.begin() + 1, r.end());
    }
    auto w = uncovered(d, rest);
    if (w) w->insert(w->begin(), canonical_min(*head));
    return w;
  }

  switch (t->kind) {
    case ValueType::Kind::Unit: {
      std::vector<Row> s;
      for (const auto& r : rows) s.emplace_back(r.begin() + 1, r.end());
      auto w = uncovered(s, rest);
      if (w) w->insert(w->begin(), Value::unit());
      return w;
    }
    case ValueType::Kind::Sum: {
      for (auto ctor : {Value::Kind::InL, Value::Kind::InR}) {
        std::vector<Row> s;
        for (const auto& r : rows) {
          const auto& p = r.front();
          if (p->kind != ctor && p->kind != Value::Kind::Var) continue;
          Row nr{p->kind == Value::Kind::Var ? wildcard() : p->first};
          nr.insert(nr.end(), r.begin() + 1, r.end());
          s.push_back(std::move(nr));
        }
        std::vector<TypePtr> ts{ctor == Value::Kind::InL ? t->left : t->right};
        ts.insert(ts.end(), rest.begin(), rest.end());
        auto w = uncovered(s, ts);
        if (w) {
          auto payload = w->front();
          w->erase(w->begin());
          w->insert(w->begin(), ctor == Value::Kind::InL ? Value::inl(payload) : Value::inr(payload));
          return w;
        }
      }
      return std::nullopt;
    }
    case ValueType::Kind::Product: {
      std::vector<Row> s;
      for (const auto& r : rows) {
        const auto& p = r.front();
        Row nr;
        if (p->kind == Value::Kind::Pair) {
          nr = {p->first, p->second};
        } else {
          nr = {wildcard(), wildcard()};
        }
        nr.insert(nr.end(), r.begin() + 1, r.end());
        s.push_back(std::move(nr));
      }
      std::vector<TypePtr> ts{t->left, t->right};
      ts.insert(ts.end(), rest.begin(), rest.end());
      auto w = uncovered(s, ts);
      if (w) {
        auto pair = Value::pair((*w)[0], (*w)[1]);
        w->erase(w->begin(), w->begin() + 2);
        w->insert(w->begin(), pair);
      }
      return w;
    }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Skeletons and clause matrices.

void rename_order(const Value& v, std::map<std::string, std::string>& out) {
  for (const auto& name : value_vars(v)) {
    if (!out.count(name)) out[name] = "#" + std::to_string(out.size());
  }
}

}  // namespace

std::map<std::string, std::string> skeleton_renaming(const ExtendedValue& bottom) {
  std::map<std::string, std::string> renaming;
  for (const auto& s : bottom.combo) rename_order(*s.value, renaming);
  return renaming;
}

namespace {

std::vector<ValuePtr> skeleton_rows(const std::vector<ExtPtr>& rhss) {
  std::vector<ValuePtr> rows;
  for (const auto& rhs : rhss) {
    const auto& bottom = bottom_value(*rhs);
    auto renaming = skeleton_renaming(bottom);
    for (const auto& s : bottom.combo) {
      auto sk = skeleton(*s.value, renaming);
      bool seen = std::any_of(rows.begin(), rows.end(),
                              [&](const ValuePtr& r) { return value_equal(*r, *sk); });
      if (!seen) rows.push_back(sk);
    }
  }
  return rows;
}

bool is_permutation(const ClauseMatrix& m) {
  if (m.row_count() != m.column_count()) return false;
  const std::size_t n = m.row_count();
  std::vector<int> row_ones(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int ones = 0;
    for (std::size_t j = 0; j < n; ++j) {
      auto v = m.entries[j][i].eval();
      if (std::abs(v - std::complex<double>(1.0, 0.0)) < 1e-12) {
        ++ones;
        ++row_ones[j];
      } else if (std::abs(v) >= 1e-12) {
        return false;
      }
    }
    if (ones != 1) return false;
  }
  return std::all_of(row_ones.begin(), row_ones.end(), [](int c) { return c == 1; });
}

// ---------------------------------------------------------------------------
// Structural recursion, syntactic part.

const Value* descend(const Value* v, const std::vector<int>& path) {
  for (int step : path) {
    if (v->kind != Value::Kind::Pair) return nullptr;
    v = step == 0 ? v->first.get() : v->second.get();
  }
  return v;
}

void collect_paths(const Value& v, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  out.push_back(prefix);
  if (v.kind != Value::Kind::Pair) return;
  prefix.push_back(0);
  collect_paths(*v.first, prefix, out);
  prefix.back() = 1;
  collect_paths(*v.second, prefix, out);
  prefix.pop_back();
}

bool is_nil(const Value* v) {
  return v && v->kind == Value::Kind::InL && v->first->kind == Value::Kind::Unit;
}

const Value* cons_tail(const Value* v) {
  if (!v || v->kind != Value::Kind::InR || v->first->kind != Value::Kind::Pair) return nullptr;
  const Value* tail = v->first->second.get();
  return tail->kind == Value::Kind::Var ? tail : nullptr;
}

bool mentions(const IsoExpr& iso, const std::string& f) { return free_iso_vars(iso).count(f) > 0; }

// Empty string when `path` certifies the block, otherwise the reason.
std::string recursion_at(const IsoExpr& block, const std::string& f, const std::vector<int>& path) {
  for (std::size_t i = 0; i < block.clauses.size(); ++i) {
    const auto& c = block.clauses[i];
    std::string where = "clause " + std::to_string(i + 1);
    const Value* at = descend(c.lhs.get(), path);
    if (is_nil(at)) {
      for (const ExtendedValue* e = c.rhs.get(); e->kind == ExtendedValue::Kind::Let; e = e->body.get()) {
        if (mentions(*e->iso, f)) return where + ": the [] case calls " + f;
      }
      continue;
    }
    const Value* tail = cons_tail(at);
    if (!tail) return where + ": pattern is neither [] nor h::t at the recursion position";
    int calls = 0;
    for (const ExtendedValue* e = c.rhs.get(); e->kind == ExtendedValue::Kind::Let; e = e->body.get()) {
      if (e->iso->kind == IsoExpr::Kind::Var && e->iso->name == f) {
        ++calls;
        const Value* arg = descend(e->argument.get(), path);
        if (!arg || arg->kind != Value::Kind::Var || arg->name != tail->name) {
          return where + ": recursive call is not on the tail " + tail->name;
        }
      } else if (mentions(*e->iso, f)) {
        return where + ": " + f + " is used other than as a direct recursive call";
      }
    }
    if (calls > 1) return where + ": more than one recursive call";
  }
  return {};
}

const IsoExpr* fix_block(const IsoExpr& fix) {
  const IsoExpr* body = fix.body.get();
  while (body->kind == IsoExpr::Kind::Lambda) body = body->body.get();
  return body->kind == IsoExpr::Kind::Clauses ? body : nullptr;
}

TypePtr type_at_path(TypePtr t, const std::vector<int>& path) {
  for (int step : path) {
    if (t->kind != ValueType::Kind::Product) return nullptr;
    t = step == 0 ? t->left : t->right;
  }
  return t;
}

// ---------------------------------------------------------------------------
// The checker proper.

struct ClauseScope {
  std::map<std::string, TypePtr> live;
  std::set<std::string> bound;
};

class Checker {
 public:
  Checker(const Program* program, const CheckOptions& options) : program_(program), options_(options) {}

  Unifier u;
  bool classical = true;

  IsoTypePtr infer_iso(const IsoContext& psi, const IsoPtr& iso) {
    switch (iso->kind) {
      case IsoExpr::Kind::Var: {
        auto it = psi.find(iso->name);
        if (it == psi.end()) {
          throw TypeError(ErrorCode::UnboundVar, "unbound iso " + iso->name, iso->span);
        }
        return it->second;
      }
      case IsoExpr::Kind::Named: {
        const Declaration* d = program_ ? program_->find(iso->name) : nullptr;
        if (!d) throw TypeError(ErrorCode::UnboundVar, "unknown iso " + iso->name, iso->span);
        std::map<std::string, TypePtr> fresh;
        return instantiate(d->type, fresh, u);
      }
      case IsoExpr::Kind::Lambda: {
        auto arg = IsoType::base(u.fresh(), u.fresh());
        IsoContext inner = psi;
        inner[iso->name] = arg;
        return IsoType::arrow(arg, infer_iso(inner, iso->body));
      }
      case IsoExpr::Kind::App: {
        auto fn = infer_iso(psi, iso->fn);
        if (fn->kind != IsoType::Kind::Arrow) {
          throw TypeError(ErrorCode::TypeMismatch,
                          "applied iso has first-order type " + pretty_print(*u.zonk(fn)),
                          iso->span);
        }
        auto arg = infer_iso(psi, iso->arg);
        u.unify(arg, fn->arg, iso->arg->span);
        return fn->result;
      }
      case IsoExpr::Kind::Fix:
        return infer_fix(psi, iso);
      case IsoExpr::Kind::Clauses:
        return infer_block(psi, iso);
    }
    throw TypeError(ErrorCode::TypeMismatch, "unknown iso form", iso->span);
  }

  TypePtr infer_term(ClauseScope& scope, const IsoContext& psi, const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Unit:
        return ValueType::unit();
      case Term::Kind::Var: {
        auto it = scope.live.find(t->name);
        if (it == scope.live.end()) {
          if (scope.bound.count(t->name)) {
            throw TypeError(ErrorCode::NonLinearVar, "variable " + t->name + " used more than once",
                            t->span);
          }
          throw TypeError(ErrorCode::UnboundVar, "unbound variable " + t->name, t->span);
        }
        auto type = it->second;
        scope.live.erase(it);
        return type;
      }
      case Term::Kind::InL:
        return ValueType::sum(infer_term(scope, psi, t->first), u.fresh());
      case Term::Kind::InR:
        return ValueType::sum(u.fresh(), infer_term(scope, psi, t->first));
      case Term::Kind::Pair: {
        auto a = infer_term(scope, psi, t->first);
        auto b = infer_term(scope, psi, t->second);
        return ValueType::product(a, b);
      }
      case Term::Kind::IsoApp: {
        auto type = first_order(infer_iso(psi, t->iso), t->iso->span);
        auto arg = infer_term(scope, psi, t->first);
        u.unify(arg, type->from, t->first->span);
        return type->to;
      }
      case Term::Kind::Let: {
        if (!is_product(*t->pattern)) {
          throw TypeError(ErrorCode::IllFormedLet, "let pattern " + show(*t->pattern) + " is not a product",
                          t->span);
        }
        auto bound_type = infer_term(scope, psi, t->first);
        std::map<std::string, std::optional<TypePtr>> shadowed;
        for (const auto& x : value_vars(*t->pattern)) {
          auto it = scope.live.find(x);
          shadowed[x] = it == scope.live.end() ? std::nullopt : std::optional<TypePtr>(it->second);
          if (it != scope.live.end()) scope.live.erase(it);
        }
        ClauseScope pattern_scope;
        bind_pattern(pattern_scope, *t->pattern, bound_type);
        for (auto& [x, ty] : pattern_scope.live) {
          scope.live[x] = ty;
          scope.bound.insert(x);
        }
        auto body = infer_term(scope, psi, t->second);
        for (auto& [x, old] : shadowed) {
          if (scope.live.count(x)) {
            throw TypeError(ErrorCode::NonLinearVar, "let-bound variable " + x + " is not used", t->span);
          }
          if (old) scope.live[x] = *old;
        }
        return body;
      }
      case Term::Kind::Sum: {
        ClauseScope left = scope;
        ClauseScope right = scope;
        auto a = infer_term(left, psi, t->first);
        auto b = infer_term(right, psi, t->second);
        u.unify(a, b, t->span);
        if (left.live.size() != right.live.size() ||
            !std::equal(left.live.begin(), left.live.end(), right.live.begin(),
                        [](const auto& x, const auto& y) { return x.first == y.first; })) {
          throw TypeError(ErrorCode::NonLinearVar, "summands use different variables", t->span);
        }
        scope = std::move(left);
        return a;
      }
      case Term::Kind::Scale:
        return infer_term(scope, psi, t->first);
    }
    throw TypeError(ErrorCode::TypeMismatch, "unknown term form", t->span);
  }

  void run_deferred() {
    // Obligations may not add new ones, but keep the loop index-based anyway.
    for (std::size_t i = 0; i < deferred_.size(); ++i) deferred_[i]();
    deferred_.clear();
  }

  BlockTypes block_types() const {
    BlockTypes out;
    for (const auto& [node, types] : blocks_) out[node] = {u.zonk(types.first), u.zonk(types.second)};
    return out;
  }

 private:
  const Program* program_;
  CheckOptions options_;
  std::vector<std::function<void()>> deferred_;
  std::map<const IsoExpr*, std::pair<TypePtr, TypePtr>> blocks_;

  IsoTypePtr first_order(const IsoTypePtr& t, Span span) {
    if (t->kind != IsoType::Kind::Base) {
      throw TypeError(ErrorCode::TypeMismatch,
                      "expected a first-order iso, found " + pretty_print(*u.zonk(t)), span);
    }
    return t;
  }

  std::pair<TypePtr, TypePtr> split(const TypePtr& type, ValueType::Kind kind, Span span) {
    auto t = u.resolve(type);
    if (t->kind == ValueType::Kind::List && kind == ValueType::Kind::Sum) t = unfold_list(t);
    if (t->kind == kind) return {t->left, t->right};
    auto l = u.fresh();
    auto r = u.fresh();
    u.unify(t, kind == ValueType::Kind::Sum ? ValueType::sum(l, r) : ValueType::product(l, r), span);
    return {l, r};
  }

  void bind_pattern(ClauseScope& scope, const Value& v, const TypePtr& type) {
    switch (v.kind) {
      case Value::Kind::Unit:
        u.unify(type, ValueType::unit(), v.span);
        return;
      case Value::Kind::Var:
        if (scope.bound.count(v.name)) {
          throw TypeError(ErrorCode::NonLinearVar, "variable " + v.name + " is bound twice", v.span);
        }
        scope.bound.insert(v.name);
        scope.live[v.name] = type;
        return;
      case Value::Kind::InL:
      case Value::Kind::InR: {
        auto [l, r] = split(type, ValueType::Kind::Sum, v.span);
        bind_pattern(scope, *v.first, v.kind == Value::Kind::InL ? l : r);
        return;
      }
      case Value::Kind::Pair: {
        auto [l, r] = split(type, ValueType::Kind::Product, v.span);
        bind_pattern(scope, *v.first, l);
        bind_pattern(scope, *v.second, r);
        return;
      }
    }
  }

  void use_value(std::map<std::string, TypePtr>& live, const std::set<std::string>& bound, const Value& v,
                 const TypePtr& type) {
    switch (v.kind) {
      case Value::Kind::Unit:
        u.unify(type, ValueType::unit(), v.span);
        return;
      case Value::Kind::Var: {
        auto it = live.find(v.name);
        if (it == live.end()) {
          if (bound.count(v.name)) {
            throw TypeError(ErrorCode::NonLinearVar, "variable " + v.name + " used more than once",
                            v.span);
          }
          throw TypeError(ErrorCode::UnboundVar, "unbound variable " + v.name, v.span);
        }
        u.unify(type, it->second, v.span);
        live.erase(it);
        return;
      }
      case Value::Kind::InL:
      case Value::Kind::InR: {
        auto [l, r] = split(type, ValueType::Kind::Sum, v.span);
        use_value(live, bound, *v.first, v.kind == Value::Kind::InL ? l : r);
        return;
      }
      case Value::Kind::Pair: {
        auto [l, r] = split(type, ValueType::Kind::Product, v.span);
        use_value(live, bound, *v.first, l);
        use_value(live, bound, *v.second, r);
        return;
      }
    }
  }

  void check_ext(const IsoContext& psi, ClauseScope& scope, const ExtendedValue& e, const TypePtr& out) {
    if (e.kind == ExtendedValue::Kind::Let) {
      if (!is_product(*e.pattern)) {
        throw TypeError(ErrorCode::IllFormedLet, "let pattern " + show(*e.pattern) + " is not a product",
                        e.span);
      }
      if (!is_product(*e.argument)) {
        throw TypeError(ErrorCode::IllFormedLet,
                        "let argument " + show(*e.argument) + " is not a product", e.span);
      }
      auto type = first_order(infer_iso(psi, e.iso), e.iso->span);
      use_value(scope.live, scope.bound, *e.argument, type->from);
      bind_pattern(scope, *e.pattern, type->to);
      check_ext(psi, scope, *e.body, out);
      return;
    }
    for (const auto& s : e.combo) {
      auto live = scope.live;
      use_value(live, scope.bound, *s.value, out);
      if (!live.empty()) {
        throw TypeError(ErrorCode::NonLinearVar, "variable " + live.begin()->first + " is not used",
                        s.value->span);
      }
    }
  }

  IsoTypePtr infer_block(const IsoContext& psi, const IsoPtr& iso) {
    auto a = u.fresh();
    auto b = u.fresh();
    for (const auto& c : iso->clauses) {
      ClauseScope scope;
      bind_pattern(scope, *c.lhs, a);
      check_ext(psi, scope, *c.rhs, b);
    }
    blocks_[iso.get()] = {a, b};
    bool shaped = is_classical_block(iso->clauses);
    if (!shaped) classical = false;
    deferred_.push_back([this, iso, a, b, shaped] {
      std::vector<ValuePtr> lhs;
      std::vector<ExtPtr> rhs;
      for (const auto& c : iso->clauses) {
        lhs.push_back(c.lhs);
        rhs.push_back(c.rhs);
      }
      try {
        check_od(u.zonk(a), lhs);
      } catch (const TypeError& e) {
        throw error_at(e, iso->span);
      }
      try {
        check_ode(u.zonk(b), rhs);
      } catch (const TypeError& e) {
        if (e.code() == ErrorCode::OverlappingClauses) {
          throw error_at(TypeError(e.code(), "right-hand sides: " + e.message()), iso->span);
        }
        throw error_at(e, iso->span);
      }
      if (shaped) return;
      try {
        auto m = assemble_clause_matrix(iso->clauses);
        check_unitary(m, options_.unitary_tol);
        if (options_.mode == Mode::Classical && !is_permutation(m)) {
          TypeError err(ErrorCode::NonUnitary, "classical mode requires a permutation clause matrix");
          throw err;
        }
      } catch (const TypeError& e) {
        throw error_at(e, iso->span);
      }
    });
    return IsoType::base(a, b);
  }

  IsoTypePtr infer_fix(const IsoContext& psi, const IsoPtr& iso) {
    std::vector<int> path;
    try {
      path = check_structural_recursion(*iso);
    } catch (const TypeError& e) {
      throw error_at(e, iso->span);
    }
    auto self = IsoType::base(u.fresh(), u.fresh());
    IsoContext inner = psi;
    inner[iso->name] = self;
    auto type = infer_iso(inner, iso->body);
    u.unify(final_base(type), self, iso->span);
    deferred_.push_back([this, self, path, iso] {
      auto at = type_at_path(u.zonk(self->from), path);
      if (!at || at->kind != ValueType::Kind::List) {
        throw TypeError(ErrorCode::NotStructurallyRecursive,
                        "recursion position has type " + (at ? pretty_print(*at) : std::string("?")) +
                            ", not a list",
                        iso->span);
      }
    });
    return type;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

bool orthogonal(const Value& a, const Value& b) {
  if ((a.kind == Value::Kind::InL && b.kind == Value::Kind::InR) ||
      (a.kind == Value::Kind::InR && b.kind == Value::Kind::InL)) {
    return true;
  }
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::InL:
    case Value::Kind::InR:
      return orthogonal(*a.first, *b.first);
    case Value::Kind::Pair:
      return orthogonal(*a.first, *b.first) || orthogonal(*a.second, *b.second);
    default:
      return false;
  }
}

std::size_t dim(const ValueType& a) {
  switch (a.kind) {
    case ValueType::Kind::Unit:
      return 1;
    case ValueType::Kind::Sum:
      return dim(*a.left) + dim(*a.right);
    case ValueType::Kind::Product:
      return dim(*a.left) * dim(*a.right);
    case ValueType::Kind::List:
      throw InfiniteTypeError("dim is undefined for list type " + pretty_print(a));
    case ValueType::Kind::Var:
      throw InfiniteTypeError("dim is undefined for opaque type " + a.name);
  }
  return 0;
}

ValuePtr canonical_min(const ValueType& a) {
  switch (a.kind) {
    case ValueType::Kind::Unit:
      return Value::unit();
    case ValueType::Kind::Sum:
      return Value::inl(canonical_min(*a.left));
    case ValueType::Kind::Product:
      return Value::pair(canonical_min(*a.left), canonical_min(*a.right));
    case ValueType::Kind::List:
      return Value::nil();
    case ValueType::Kind::Var:
      return wildcard();
  }
  return wildcard();
}

void check_od(const TypePtr& a, const std::vector<ValuePtr>& patterns) {
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    for (std::size_t j = i + 1; j < patterns.size(); ++j) {
      if (!orthogonal(*patterns[i], *patterns[j])) {
        TypeError e(ErrorCode::OverlappingClauses,
                    "patterns " + show(*patterns[i], a) + " and " + show(*patterns[j], a) + " overlap");
        e.witness = patterns[i];
        e.other = patterns[j];
        e.witness_type = a;
        throw e;
      }
    }
  }
  std::vector<Row> rows;
  for (const auto& p : patterns) rows.push_back(Row{p});
  auto w = uncovered(rows, {a});
  if (w) {
    TypeError e(ErrorCode::NonExhaustive, "no pattern covers " + show(*w->front(), a));
    e.witness = w->front();
    e.witness_type = a;
    throw e;
  }
}

bool is_classical_block(const std::vector<Clause>& clauses) {
  return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) {
    const auto& b = bottom_value(*c.rhs);
    return b.is_pure();
  });
}

void check_ode(const TypePtr& b, const std::vector<ExtPtr>& rhss) {
  bool shaped = std::all_of(rhss.begin(), rhss.end(),
                            [](const ExtPtr& e) { return bottom_value(*e).is_pure(); });
  if (shaped) {
    std::vector<ValuePtr> bottoms;
    for (const auto& e : rhss) bottoms.push_back(bottom_value(*e).combo.front().value);
    check_od(b, bottoms);
    return;
  }
  check_od(b, skeleton_rows(rhss));
}

ValuePtr skeleton(const Value& v, const std::map<std::string, std::string>& renaming) {
  switch (v.kind) {
    case Value::Kind::Unit:
      return Value::unit(v.span);
    case Value::Kind::Var: {
      auto it = renaming.find(v.name);
      return Value::var(it == renaming.end() ? v.name : it->second, v.span);
    }
    case Value::Kind::InL:
      return Value::inl(skeleton(*v.first, renaming), v.span);
    case Value::Kind::InR:
      return Value::inr(skeleton(*v.first, renaming), v.span);
    case Value::Kind::Pair:
      return Value::pair(skeleton(*v.first, renaming), skeleton(*v.second, renaming), v.span);
  }
  return nullptr;
}

ClauseMatrix assemble_clause_matrix(const std::vector<Clause>& clauses) {
  std::vector<ExtPtr> rhss;
  for (const auto& c : clauses) rhss.push_back(c.rhs);
  ClauseMatrix m;
  m.rows = skeleton_rows(rhss);
  for (const auto& c : clauses) m.columns.push_back(c.lhs);
  if (m.rows.size() != m.columns.size()) {
    throw TypeError(ErrorCode::ArityMismatch, std::to_string(m.columns.size()) + " clauses but " +
                                                  std::to_string(m.rows.size()) +
                                                  " distinct right-hand values");
  }
  m.entries.assign(m.rows.size(), std::vector<Amplitude>(m.columns.size(), Amplitude::integer(0)));
  std::vector<std::vector<bool>> touched(m.rows.size(), std::vector<bool>(m.columns.size(), false));
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto& bottom = bottom_value(*clauses[i].rhs);
    auto renaming = skeleton_renaming(bottom);
    for (const auto& s : bottom.combo) {
      auto sk = skeleton(*s.value, renaming);
      for (std::size_t j = 0; j < m.rows.size(); ++j) {
        if (!value_equal(*m.rows[j], *sk)) continue;
        m.entries[j][i] = touched[j][i] ? m.entries[j][i] + s.amplitude : s.amplitude;
        touched[j][i] = true;
      }
    }
  }
  return m;
}

double unitarity_deviation(const ClauseMatrix& m) {
  const std::size_t n = m.row_count();
  if (n != m.column_count()) return std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::complex<double>>> a(n, std::vector<std::complex<double>>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) a[j][i] = m.entries[j][i].eval();
  }
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      std::complex<double> cols = 0.0;  // (M*M)[x][y]
      std::complex<double> rows = 0.0;  // (MM*)[x][y]
      for (std::size_t k = 0; k < n; ++k) {
        cols += std::conj(a[k][x]) * a[k][y];
        rows += a[x][k] * std::conj(a[y][k]);
      }
      double id = x == y ? 1.0 : 0.0;
      worst = std::max({worst, std::abs(cols - id), std::abs(rows - id)});
    }
  }
  return worst;
}

void check_unitary(const ClauseMatrix& m, double tol) {
  double dev = unitarity_deviation(m);
  if (!(dev <= tol)) {
    TypeError e(ErrorCode::NonUnitary, "clause matrix deviates from unitary by " + std::to_string(dev));
    e.deviation = dev;
    throw e;
  }
}

std::vector<int> check_structural_recursion(const IsoExpr& fix) {
  if (fix.kind != IsoExpr::Kind::Fix) {
    throw TypeError(ErrorCode::NotStructurallyRecursive, "not a fixpoint", fix.span);
  }
  const IsoExpr* block = fix_block(fix);
  if (!block) {
    throw TypeError(ErrorCode::NotStructurallyRecursive,
                    "fixpoint body must be a clause block, possibly under lambdas", fix.span);
  }
  std::vector<std::vector<int>> paths;
  std::vector<int> prefix;
  collect_paths(*block->clauses.front().lhs, prefix, paths);
  std::string first_reason;
  for (const auto& path : paths) {
    auto reason = recursion_at(*block, fix.name, path);
    if (reason.empty()) return path;
    if (first_reason.empty()) first_reason = reason;
  }
  throw TypeError(ErrorCode::NotStructurallyRecursive, first_reason, fix.span);
}

void check_structural_recursion(const IsoExpr& fix, const IsoType& declared) {
  auto path = check_structural_recursion(fix);
  auto base = final_base(std::make_shared<IsoType>(declared));
  auto at = type_at_path(base->from, path);
  if (!at || at->kind != ValueType::Kind::List) {
    throw TypeError(ErrorCode::NotStructurallyRecursive,
                    "input type " + pretty_print(*base->from) + " has no list at the recursion position",
                    fix.span);
  }
}

void check_value(const ValueContext& delta, const IsoContext& psi, const TermPtr& t, const TypePtr& a,
                 const Program* program, const CheckOptions& options) {
  Checker c(program, options);
  ClauseScope scope;
  for (const auto& [x, ty] : delta) {
    scope.live[x] = ty;
    scope.bound.insert(x);
  }
  auto type = c.infer_term(scope, psi, t);
  c.u.unify(type, a, t->span);
  if (!scope.live.empty()) {
    throw TypeError(ErrorCode::NonLinearVar, "variable " + scope.live.begin()->first + " is not used",
                    t->span);
  }
  c.run_deferred();
}

TypePtr infer_term(const TermPtr& t, const Program* program, const CheckOptions& options) {
  Checker c(program, options);
  ClauseScope scope;
  auto type = c.infer_term(scope, {}, t);
  c.run_deferred();
  return c.u.zonk(type);
}

IsoTypePtr check_iso(const IsoContext& psi, const IsoPtr& iso, const Program* program,
                     const CheckOptions& options) {
  Checker c(program, options);
  auto type = c.infer_iso(psi, iso);
  c.run_deferred();
  return c.u.zonk(type);
}

BlockTypes CheckResult::block_types() const {
  BlockTypes out;
  for (const auto& [name, info] : decls) out.insert(info.block_types.begin(), info.block_types.end());
  return out;
}

CheckResult check_program(const Program& program, const CheckOptions& options, bool all_errors) {
  CheckResult result;
  for (const auto& d : program.decls) {
    try {
      Checker c(&program, options);
      auto type = c.infer_iso({}, d.body);
      c.u.unify(type, d.type, d.span);
      c.run_deferred();
      DeclarationInfo info;
      info.type = d.type;
      info.classical = c.classical;
      for (const auto& dep : referenced_declarations(*d.body)) {
        auto it = result.decls.find(dep);
        if (it != result.decls.end() && !it->second.classical) info.classical = false;
      }
      info.block_types = c.block_types();
      result.decls[d.name] = std::move(info);
    } catch (const TypeError& e) {
      TypeError err = e;
      err.set_declaration(d.name);
      result.errors.push_back(err);
      if (!all_errors) break;
    }
  }
  return result;
}

CheckResult check_program_or_throw(const Program& program, const CheckOptions& options) {
  auto result = check_program(program, options, false);
  if (!result.ok()) throw result.errors.front();
  return result;
}

}  // namespace isoq
