// SPDX-License-Identifier: Apache-2.0
#include "isoq/inverter.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "isoq/typechecker.hpp"

namespace isoq {

IsoTypePtr invert_type(const IsoTypePtr& t) {
  if (t->kind == IsoType::Kind::Base) return IsoType::base(t->to, t->from);
  return IsoType::arrow(invert_type(t->arg), invert_type(t->result));
}

std::string inverse_name(const std::string& name) {
  static const std::string suffix = "_inv";
  if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return name.substr(0, name.size() - suffix.size());
  }
  return name + suffix;
}

namespace {

using Renaming = std::map<std::string, std::string>;

ValuePtr rename(const Value& v, const Renaming& r) {
  switch (v.kind) {
    case Value::Kind::Unit:
      return Value::unit(v.span);
    case Value::Kind::Var: {
      auto it = r.find(v.name);
      return Value::var(it == r.end() ? v.name : it->second, v.span);
    }
    case Value::Kind::InL:
      return Value::inl(rename(*v.first, r), v.span);
    case Value::Kind::InR:
      return Value::inr(rename(*v.first, r), v.span);
    case Value::Kind::Pair:
      return Value::pair(rename(*v.first, r), rename(*v.second, r), v.span);
  }
  return nullptr;
}

// Clause variables -> x0, x1, ... following the skeleton numbering.
Renaming readable_renaming(const ExtendedValue& bottom) {
  Renaming out;
  for (const auto& [name, hashed] : skeleton_renaming(bottom)) out[name] = "x" + hashed.substr(1);
  return out;
}

Renaming hashed_to_readable(const Value& skeleton_value) {
  Renaming out;
  for (const auto& name : value_vars(skeleton_value)) out[name] = "x" + name.substr(1);
  return out;
}

struct LetStep {
  ValuePtr pattern;
  IsoPtr iso;
  ValuePtr argument;
  Span span;
};

std::vector<LetStep> let_chain(const ExtendedValue& e) {
  std::vector<LetStep> steps;
  const ExtendedValue* cur = &e;
  while (cur->kind == ExtendedValue::Kind::Let) {
    steps.push_back({cur->pattern, cur->iso, cur->argument, cur->span});
    cur = cur->body.get();
  }
  return steps;
}

ExtPtr wrap_lets(const std::vector<LetStep>& steps, ExtPtr body) {
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    body = ExtendedValue::let(it->pattern, it->iso, it->argument, body, it->span);
  }
  return body;
}

// v <-> let p1 = w1 a1 in .. let pn = wn an in u   becomes
// u <-> let an = wn^-1 pn in .. let a1 = w1^-1 p1 in v
IsoPtr invert_classical(const IsoExpr& block) {
  std::vector<Clause> out;
  for (const auto& c : block.clauses) {
    auto steps = let_chain(*c.rhs);
    const auto& bottom = bottom_value(*c.rhs);
    std::vector<LetStep> reversed;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      reversed.push_back({it->argument, invert_iso(it->iso), it->pattern, it->span});
    }
    out.push_back(Clause{bottom.combo.front().value, wrap_lets(reversed, ExtendedValue::value(c.lhs)), c.span});
  }
  return IsoExpr::block(std::move(out), block.span);
}

bool nonzero(const Amplitude& a) { return std::abs(a.eval()) > 1e-12; }

// Let-free block: one clause per matrix row, amplitudes conjugated.
IsoPtr invert_rotation(const IsoExpr& block) {
  auto m = assemble_clause_matrix(block.clauses);
  std::vector<Renaming> renamings;
  for (const auto& c : block.clauses) renamings.push_back(readable_renaming(bottom_value(*c.rhs)));
  std::vector<Clause> out;
  for (std::size_t j = 0; j < m.row_count(); ++j) {
    std::vector<Summand> summands;
    for (std::size_t i = 0; i < m.column_count(); ++i) {
      if (!nonzero(m.entries[j][i])) continue;
      summands.push_back(Summand{m.entries[j][i].conj(), rename(*block.clauses[i].lhs, renamings[i])});
    }
    out.push_back(Clause{rename(*m.rows[j], hashed_to_readable(*m.rows[j])),
                         ExtendedValue::combination(std::move(summands), block.span), block.span});
  }
  return IsoExpr::block(std::move(out), block.span);
}

// Kuhn's augmenting paths: clause i -> row match[i] with a nonzero entry.
std::vector<std::size_t> perfect_matching(const ClauseMatrix& m) {
  const std::size_t n = m.column_count();
  std::vector<std::size_t> row_owner(n, n);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& seen) {
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[j] || !nonzero(m.entries[j][i])) continue;
      seen[j] = true;
      if (row_owner[j] == n || augment(row_owner[j], seen)) {
        row_owner[j] = i;
        return true;
      }
    }
    return false;
  };
  // Greedy first so that diagonal-friendly blocks keep clause order.
  std::vector<bool> matched(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (row_owner[j] == n && nonzero(m.entries[j][i])) {
        row_owner[j] = i;
        matched[i] = true;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (matched[i]) continue;
    std::vector<bool> seen(n, false);
    if (!augment(i, seen)) throw std::invalid_argument("clause matrix is singular");
  }
  std::vector<std::size_t> match(n);
  for (std::size_t j = 0; j < n; ++j) match[row_owner[j]] = j;
  return match;
}

IsoPtr invert_quantum_with_lets(const IsoExpr& block) {
  auto m = assemble_clause_matrix(block.clauses);
  auto match = perfect_matching(m);
  std::vector<Clause> straight;
  std::vector<Clause> rotate;
  for (std::size_t i = 0; i < block.clauses.size(); ++i) {
    const auto& c = block.clauses[i];
    const auto& bottom = bottom_value(*c.rhs);
    auto hashed = skeleton_renaming(bottom);
    auto readable = readable_renaming(bottom);
    ValuePtr pivot;
    for (const auto& s : bottom.combo) {
      if (value_equal(*skeleton(*s.value, hashed), *m.rows[match[i]])) {
        pivot = s.value;
        break;
      }
    }
    straight.push_back(Clause{c.lhs, wrap_lets(let_chain(*c.rhs), ExtendedValue::value(pivot)), c.span});
    std::vector<Summand> summands;
    for (const auto& s : bottom.combo) summands.push_back(Summand{s.amplitude, rename(*s.value, readable)});
    rotate.push_back(Clause{rename(*pivot, readable), ExtendedValue::combination(std::move(summands), c.span),
                            c.span});
  }
  auto straight_inv = invert_classical(*IsoExpr::block(std::move(straight), block.span));
  auto rotate_inv = invert_rotation(*IsoExpr::block(std::move(rotate), block.span));
  // { x <-> let y = R^-1 x in let z = S^-1 y in z }
  auto x = Value::var("x");
  auto y = Value::var("y");
  auto z = Value::var("z");
  auto body = ExtendedValue::let(y, rotate_inv, x, ExtendedValue::let(z, straight_inv, y, ExtendedValue::value(z)));
  return IsoExpr::block({Clause{x, body, block.span}}, block.span);
}

}  // namespace

IsoPtr invert_iso(const IsoPtr& iso) {
  switch (iso->kind) {
    case IsoExpr::Kind::Var:
      return iso;
    case IsoExpr::Kind::Named:
      return IsoExpr::named(inverse_name(iso->name), iso->span);
    case IsoExpr::Kind::Lambda:
      return IsoExpr::lambda(iso->name, invert_iso(iso->body), iso->span);
    case IsoExpr::Kind::Fix:
      return IsoExpr::fix(iso->name, invert_iso(iso->body), iso->span);
    case IsoExpr::Kind::App:
      return IsoExpr::app(invert_iso(iso->fn), invert_iso(iso->arg), iso->span);
    case IsoExpr::Kind::Clauses: {
      if (is_classical_block(iso->clauses)) return invert_classical(*iso);
      bool has_lets = false;
      for (const auto& c : iso->clauses) has_lets = has_lets || c.rhs->kind == ExtendedValue::Kind::Let;
      return has_lets ? invert_quantum_with_lets(*iso) : invert_rotation(*iso);
    }
  }
  return iso;
}

std::vector<Declaration> invert_declarations(const Program& program, const std::vector<std::string>& names) {
  std::set<std::string> wanted;
  std::vector<std::string> todo(names.begin(), names.end());
  while (!todo.empty()) {
    auto name = todo.back();
    todo.pop_back();
    if (!wanted.insert(name).second) continue;
    const Declaration* d = program.find(name);
    if (!d) throw std::invalid_argument("unknown declaration " + name);
    for (const auto& dep : referenced_declarations(*d->body)) todo.push_back(dep);
  }
  std::vector<Declaration> out;
  for (const auto& d : program.decls) {
    if (!wanted.count(d.name)) continue;
    out.push_back(Declaration{inverse_name(d.name), invert_type(d.type), invert_iso(d.body), d.span});
  }
  return out;
}

Program with_inverses(const Program& program) {
  Program out = program;
  std::vector<std::string> names;
  for (const auto& d : program.decls) names.push_back(d.name);
  for (auto& d : invert_declarations(program, names)) {
    if (!program.find(d.name)) out.decls.push_back(std::move(d));
  }
  return out;
}

}  // namespace isoq
