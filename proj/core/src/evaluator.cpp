// SPDX-License-Identifier: Apache-2.0
#include "isoq/evaluator.hpp"

#include <atomic>
#include <cmath>
#include <set>

#include "isoq/printer.hpp"

namespace isoq {

double Superposition::norm() const {
  double s = 0.0;
  for (const auto& [v, a] : entries) s += std::norm(a);
  return std::sqrt(s);
}

std::complex<double> Superposition::amplitude(const ValuePtr& v) const {
  auto it = entries.find(v);
  return it == entries.end() ? std::complex<double>(0.0, 0.0) : it->second;
}

std::optional<Valuation> match_value(const Value& pattern, const ValuePtr& w) {
  Valuation sigma;
  std::function<bool(const Value&, const ValuePtr&)> go = [&](const Value& p, const ValuePtr& v) {
    switch (p.kind) {
      case Value::Kind::Unit:
        return v->kind == Value::Kind::Unit;
      case Value::Kind::Var:
        sigma[p.name] = v;
        return true;
      case Value::Kind::InL:
      case Value::Kind::InR:
        return v->kind == p.kind && go(*p.first, v->first);
      case Value::Kind::Pair:
        return v->kind == Value::Kind::Pair && go(*p.first, v->first) && go(*p.second, v->second);
    }
    return false;
  };
  if (!go(pattern, w)) return std::nullopt;
  return sigma;
}

namespace {

TermPtr subst(const Valuation& sigma, const TermPtr& t, const std::set<std::string>& bound = {}) {
  switch (t->kind) {
    case Term::Kind::Unit:
      return t;
    case Term::Kind::Var: {
      auto it = sigma.find(t->name);
      if (it == sigma.end()) {
        if (bound.count(t->name)) return t;
        throw EvalError(EvalError::Kind::UnboundVariable, "no value for variable " + t->name);
      }
      return value_to_term(it->second);
    }
    case Term::Kind::InL:
      return Term::inl(subst(sigma, t->first, bound), t->span);
    case Term::Kind::InR:
      return Term::inr(subst(sigma, t->first, bound), t->span);
    case Term::Kind::Pair:
      return Term::pair(subst(sigma, t->first, bound), subst(sigma, t->second, bound), t->span);
    case Term::Kind::Sum:
      return Term::sum(subst(sigma, t->first, bound), subst(sigma, t->second, bound), t->span);
    case Term::Kind::Scale:
      return Term::scale(t->amplitude, subst(sigma, t->first, bound), t->span);
    case Term::Kind::IsoApp:
      return Term::apply(t->iso, subst(sigma, t->first, bound), t->span);
    case Term::Kind::Let: {
      auto bound_term = subst(sigma, t->first, bound);
      Valuation inner = sigma;
      std::set<std::string> inner_bound = bound;
      for (const auto& x : value_vars(*t->pattern)) {
        inner.erase(x);
        inner_bound.insert(x);
      }
      return Term::let(t->pattern, bound_term, subst(inner, t->second, inner_bound), t->span);
    }
  }
  return t;
}

std::atomic<unsigned long> fresh_counter{0};

std::string fresh_name(const std::string& base) {
  return base + "%" + std::to_string(fresh_counter.fetch_add(1));
}

ExtPtr subst_iso_ext(const ExtPtr& e, const std::string& name, const IsoPtr& replacement) {
  if (e->kind == ExtendedValue::Kind::Combo) return e;
  return ExtendedValue::let(e->pattern, substitute_iso(e->iso, name, replacement), e->argument,
                            subst_iso_ext(e->body, name, replacement), e->span);
}

}  // namespace

TermPtr substitute(const Valuation& sigma, const TermPtr& t) { return subst(sigma, t); }

TermPtr substitute(const Valuation& sigma, const ExtendedValue& e) {
  return subst(sigma, ext_to_term(std::make_shared<ExtendedValue>(e)));
}

IsoPtr substitute_iso(const IsoPtr& body, const std::string& name, const IsoPtr& replacement) {
  switch (body->kind) {
    case IsoExpr::Kind::Var:
      return body->name == name ? replacement : body;
    case IsoExpr::Kind::Named:
      return body;
    case IsoExpr::Kind::App:
      return IsoExpr::app(substitute_iso(body->fn, name, replacement),
                          substitute_iso(body->arg, name, replacement), body->span);
    case IsoExpr::Kind::Lambda:
    case IsoExpr::Kind::Fix: {
      if (body->name == name) return body;
      std::string binder = body->name;
      IsoPtr inner = body->body;
      if (free_iso_vars(*replacement).count(binder)) {
        std::string renamed = fresh_name(binder);
        inner = substitute_iso(inner, binder, IsoExpr::var(renamed, body->span));
        binder = renamed;
      }
      inner = substitute_iso(inner, name, replacement);
      return body->kind == IsoExpr::Kind::Lambda ? IsoExpr::lambda(binder, inner, body->span)
                                                 : IsoExpr::fix(binder, inner, body->span);
    }
    case IsoExpr::Kind::Clauses: {
      std::vector<Clause> clauses;
      clauses.reserve(body->clauses.size());
      for (const auto& c : body->clauses) {
        clauses.push_back(Clause{c.lhs, subst_iso_ext(c.rhs, name, replacement), c.span});
      }
      return IsoExpr::block(std::move(clauses), body->span);
    }
  }
  return body;
}

bool is_closed_value(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Unit:
      return true;
    case Term::Kind::InL:
    case Term::Kind::InR:
      return is_closed_value(*t.first);
    case Term::Kind::Pair:
      return is_closed_value(*t.first) && is_closed_value(*t.second);
    default:
      return false;
  }
}

namespace {

ValuePtr to_value(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Unit:
      return Value::unit();
    case Term::Kind::InL:
      return Value::inl(to_value(*t.first));
    case Term::Kind::InR:
      return Value::inr(to_value(*t.first));
    case Term::Kind::Pair:
      return Value::pair(to_value(*t.first), to_value(*t.second));
    default:
      throw EvalError(EvalError::Kind::StuckTerm, "not a value: " + pretty_print(t));
  }
}

[[noreturn]] void stuck(const std::string& why, const Term& t) {
  throw EvalError(EvalError::Kind::StuckTerm, why + ": " + pretty_print(t));
}

class Stepper {
 public:
  Stepper(const Program& program, EvalStats* stats) : program_(program), stats_(stats) {}

  std::optional<TermPtr> step(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Unit:
        return std::nullopt;
      case Term::Kind::Var:
        stuck("free variable", *t);
      case Term::Kind::InL:
      case Term::Kind::InR: {
        auto s = step(t->first);
        if (!s) return std::nullopt;
        return t->kind == Term::Kind::InL ? Term::inl(*s, t->span) : Term::inr(*s, t->span);
      }
      case Term::Kind::Pair: {
        if (auto s = step(t->first)) return Term::pair(*s, t->second, t->span);
        if (auto s = step(t->second)) return Term::pair(t->first, *s, t->span);
        return std::nullopt;
      }
      case Term::Kind::Sum:
      case Term::Kind::Scale:
        stuck("linear combination inside a pure term", *t);
      case Term::Kind::Let: {
        if (auto s = step(t->first)) return Term::let(t->pattern, *s, t->second, t->span);
        auto sigma = match_value(*t->pattern, to_value(*t->first));
        if (!sigma) stuck("let pattern does not match", *t);
        count(&EvalStats::let_e);
        return substitute(*sigma, t->second);
      }
      case Term::Kind::IsoApp: {
        if (auto s = step(t->first)) return Term::apply(t->iso, *s, t->span);
        return reduce_application(*t);
      }
    }
    return std::nullopt;
  }

 private:
  const Program& program_;
  EvalStats* stats_;

  void count(std::size_t EvalStats::*field) {
    if (stats_) ++(stats_->*field);
  }

  TermPtr reduce_application(const Term& t) {
    const IsoPtr& iso = t.iso;
    if (iso->kind == IsoExpr::Kind::Clauses) {
      auto v = to_value(*t.first);
      const Clause* chosen = nullptr;
      Valuation sigma;
      for (const auto& c : iso->clauses) {
        auto m = match_value(*c.lhs, v);
        if (!m) continue;
        if (chosen) stuck("more than one clause matches", t);
        chosen = &c;
        sigma = std::move(*m);
      }
      if (!chosen) stuck("no clause matches", t);
      count(&EvalStats::iso_app);
      return substitute(sigma, ext_to_term(chosen->rhs));
    }
    auto next = step_iso(iso);
    if (!next) stuck("iso cannot be applied", t);
    return Term::apply(*next, t.first, t.span);
  }

  std::optional<IsoPtr> step_iso(const IsoPtr& iso) {
    switch (iso->kind) {
      case IsoExpr::Kind::Named: {
        const Declaration* d = program_.find(iso->name);
        if (!d) return std::nullopt;
        count(&EvalStats::unfold);
        return d->body;
      }
      case IsoExpr::Kind::Fix: {
        // mu f. \g1..gn. C  ->  \g1..gn. C[((mu f. ...) g1 .. gn)/f]
        std::vector<std::string> binders;
        const IsoExpr* body = iso->body.get();
        while (body->kind == IsoExpr::Kind::Lambda) {
          binders.push_back(body->name);
          body = body->body.get();
        }
        IsoPtr call = iso;
        for (const auto& g : binders) call = IsoExpr::app(call, IsoExpr::var(g, iso->span), iso->span);
        IsoPtr inner = iso->body;
        for (std::size_t k = 0; k < binders.size(); ++k) inner = inner->body;
        IsoPtr out = substitute_iso(inner, iso->name, call);
        for (auto it = binders.rbegin(); it != binders.rend(); ++it) out = IsoExpr::lambda(*it, out, iso->span);
        count(&EvalStats::iso_rec);
        return out;
      }
      case IsoExpr::Kind::App: {
        if (iso->fn->kind == IsoExpr::Kind::Lambda) {
          count(&EvalStats::h_iso_app);
          return substitute_iso(iso->fn->body, iso->fn->name, iso->arg);
        }
        auto fn = step_iso(iso->fn);
        if (!fn) return std::nullopt;
        return IsoExpr::app(*fn, iso->arg, iso->span);
      }
      default:
        return std::nullopt;
    }
  }
};

using Component = std::pair<std::complex<double>, TermPtr>;

std::vector<Component> flatten_impl(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Unit:
    case Term::Kind::Var:
      return {{1.0, t}};
    case Term::Kind::InL:
    case Term::Kind::InR: {
      auto inner = flatten_impl(t->first);
      if (inner.size() == 1 && inner[0].first == 1.0 && inner[0].second == t->first) return {{1.0, t}};
      for (auto& [a, u] : inner) {
        u = t->kind == Term::Kind::InL ? Term::inl(u, t->span) : Term::inr(u, t->span);
      }
      return inner;
    }
    case Term::Kind::Pair: {
      auto l = flatten_impl(t->first);
      auto r = flatten_impl(t->second);
      if (l.size() == 1 && r.size() == 1 && l[0].first == 1.0 && r[0].first == 1.0 &&
          l[0].second == t->first && r[0].second == t->second) {
        return {{1.0, t}};
      }
      std::vector<Component> out;
      out.reserve(l.size() * r.size());
      for (const auto& [a, x] : l) {
        for (const auto& [b, y] : r) out.emplace_back(a * b, Term::pair(x, y, t->span));
      }
      return out;
    }
    case Term::Kind::Sum: {
      auto out = flatten_impl(t->first);
      auto r = flatten_impl(t->second);
      out.insert(out.end(), r.begin(), r.end());
      return out;
    }
    case Term::Kind::Scale: {
      auto out = flatten_impl(t->first);
      auto alpha = t->amplitude.eval();
      for (auto& c : out) c.first *= alpha;
      return out;
    }
    case Term::Kind::IsoApp: {
      auto inner = flatten_impl(t->first);
      if (inner.size() == 1 && inner[0].first == 1.0 && inner[0].second == t->first) return {{1.0, t}};
      for (auto& [a, u] : inner) u = Term::apply(t->iso, u, t->span);
      return inner;
    }
    case Term::Kind::Let: {
      auto inner = flatten_impl(t->first);
      if (inner.size() == 1 && inner[0].first == 1.0 && inner[0].second == t->first) return {{1.0, t}};
      for (auto& [a, u] : inner) u = Term::let(t->pattern, u, t->second, t->span);
      return inner;
    }
  }
  return {{1.0, t}};
}

}  // namespace

std::optional<TermPtr> step_pure(const TermPtr& t, const Program& program, EvalStats* stats) {
  return Stepper(program, stats).step(t);
}

std::vector<std::pair<std::complex<double>, TermPtr>> flatten(const TermPtr& t) { return flatten_impl(t); }

Superposition normalize(const TermPtr& t, const Program& program, const EvalOptions& options,
                        EvalStats* stats) {
  struct Work {
    std::complex<double> amp;
    TermPtr term;
    std::size_t steps;
  };
  Stepper stepper(program, stats);
  Superposition out;
  std::vector<Work> work;
  auto parts = flatten_impl(t);
  // Reverse so components are processed left to right.
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) work.push_back({it->first, it->second, 0});
  while (!work.empty()) {
    Work w = std::move(work.back());
    work.pop_back();
    if (std::abs(w.amp) < options.prune) continue;
    if (is_closed_value(*w.term)) {
      auto [pos, inserted] = out.entries.emplace(to_value(*w.term), w.amp);
      if (!inserted) pos->second += w.amp;
      continue;
    }
    if (w.steps >= options.fuel) {
      throw EvalError(EvalError::Kind::FuelExhausted, "fuel of " + std::to_string(options.fuel) +
                                                          " steps exhausted on " + pretty_print(*w.term));
    }
    if (options.observer) options.observer(w.term);
    auto next = stepper.step(w.term);
    if (!next) stuck("no rule applies", *w.term);
    if (stats) ++stats->steps;
    auto split = flatten_impl(*next);
    for (auto it = split.rbegin(); it != split.rend(); ++it) {
      work.push_back({w.amp * it->first, it->second, w.steps + 1});
    }
  }
  for (auto it = out.entries.begin(); it != out.entries.end();) {
    if (std::abs(it->second) < options.prune) {
      it = out.entries.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

Superposition apply(const IsoPtr& iso, const ValuePtr& v, const Program& program, const EvalOptions& options,
                    EvalStats* stats) {
  return normalize(Term::apply(iso, value_to_term(v)), program, options, stats);
}

Superposition apply(const IsoPtr& iso, const Superposition& input, const Program& program,
                    const EvalOptions& options) {
  Superposition out;
  for (const auto& [v, a] : input.entries) {
    auto column = apply(iso, v, program, options);
    for (const auto& [w, b] : column.entries) out.entries[w] += a * b;
  }
  for (auto it = out.entries.begin(); it != out.entries.end();) {
    if (std::abs(it->second) < options.prune) {
      it = out.entries.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

ValuePtr run_classical(const IsoPtr& iso, const ValuePtr& v, const Program& program,
                       const EvalOptions& options) {
  auto s = apply(iso, v, program, options);
  if (s.size() != 1 || std::abs(s.entries.begin()->second - 1.0) > 1e-9) {
    throw EvalError(EvalError::Kind::NotClassical,
                    "result is a superposition of " + std::to_string(s.size()) + " values");
  }
  return s.entries.begin()->first;
}

}  // namespace isoq
