// SPDX-License-Identifier: Apache-2.0
#include "isoq/printer.hpp"

namespace isoq {

namespace {

std::string paren_if(bool wrap, std::string s) { return wrap ? "(" + s + ")" : s; }

// ---- types: 0 sum, 1 product, 2 atom

std::string type_at(const ValueType& t, int level) {
  switch (t.kind) {
    case ValueType::Kind::Unit:
      return "1";
    case ValueType::Kind::Var:
      return t.name;
    case ValueType::Kind::List:
      return "[" + type_at(*t.left, 0) + "]";
    case ValueType::Kind::Sum:
      if (is_boolean(t)) return "B";
      return paren_if(level > 0, type_at(*t.left, 1) + " + " + type_at(*t.right, 0));
    case ValueType::Kind::Product:
      return paren_if(level > 1, type_at(*t.left, 2) + " * " + type_at(*t.right, 1));
  }
  return "?";
}

// ---- values: 0 cons, 1 prefix (inl/inr), 2 atom

bool is_unit_value(const ValuePtr& v) { return v && v->kind == Value::Kind::Unit; }

std::string value_at(const Value& v, const ValueType* type, int level);

std::string tuple_body(const Value& v, const ValueType* type) {
  std::string out = value_at(*v.first, type ? type->left.get() : nullptr, 0);
  const Value* rest = v.second.get();
  const ValueType* rest_type = type ? type->right.get() : nullptr;
  while (rest->kind == Value::Kind::Pair &&
         (!rest_type || rest_type->kind == ValueType::Kind::Product)) {
    out += ", " + value_at(*rest->first, rest_type ? rest_type->left.get() : nullptr, 0);
    rest_type = rest_type ? rest_type->right.get() : nullptr;
    rest = rest->second.get();
  }
  return out + ", " + value_at(*rest, rest_type, 0);
}

std::string list_value(const Value& v, const ValueType& type, int level) {
  const ValueType* elem = type.left.get();
  std::vector<const Value*> heads;
  const Value* cur = &v;
  while (cur->kind == Value::Kind::InR && cur->first->kind == Value::Kind::Pair) {
    heads.push_back(cur->first->first.get());
    cur = cur->first->second.get();
  }
  bool closed = cur->kind == Value::Kind::InL && is_unit_value(cur->first);
  if (closed) {
    std::string out = "[";
    for (std::size_t i = 0; i < heads.size(); ++i) {
      if (i > 0) out += ", ";
      out += value_at(*heads[i], elem, 0);
    }
    return out + "]";
  }
  if (heads.empty()) {
    if (cur->kind == Value::Kind::Var) return cur->name;
    // Not list-shaped: fall back to the unfolded view.
    return value_at(*cur, nullptr, level);
  }
  std::string out;
  for (const Value* h : heads) out += value_at(*h, elem, 1) + "::";
  out += value_at(*cur, &type, 1);
  return paren_if(level > 0, out);
}

std::string value_at(const Value& v, const ValueType* type, int level) {
  if (type && type->kind == ValueType::Kind::Var) type = nullptr;
  if (type && type->kind == ValueType::Kind::List) return list_value(v, *type, level);
  switch (v.kind) {
    case Value::Kind::Unit:
      return "()";
    case Value::Kind::Var:
      return v.name;
    case Value::Kind::InL:
    case Value::Kind::InR: {
      bool boolean = type ? is_boolean(*type) : is_unit_value(v.first);
      if (boolean && is_unit_value(v.first)) return v.kind == Value::Kind::InL ? "tt" : "ff";
      const ValueType* payload = nullptr;
      if (type && type->kind == ValueType::Kind::Sum) {
        payload = v.kind == Value::Kind::InL ? type->left.get() : type->right.get();
      }
      std::string kw = v.kind == Value::Kind::InL ? "inl " : "inr ";
      return paren_if(level > 1, kw + value_at(*v.first, payload, 1));
    }
    case Value::Kind::Pair: {
      const ValueType* t = type && type->kind == ValueType::Kind::Product ? type : nullptr;
      return "(" + tuple_body(v, t) + ")";
    }
  }
  return "?";
}

// ---- amplitudes in summand position

std::string amplitude_prefix(const Amplitude& a) {
  bool additive = a.kind() == Amplitude::Kind::Add || a.kind() == Amplitude::Kind::Sub;
  return a.to_string(additive) + "*";
}

// ---- isos: 0 full, 1 application, 2 atom

std::string iso_at(const IsoExpr& iso, const PrintOptions& opts, int level, const std::string& indent);

std::string ext_at(const ExtendedValue& e, const ValueType* out_type, const PrintOptions& opts,
                   const std::string& indent) {
  if (e.kind == ExtendedValue::Kind::Let) {
    return "let " + value_at(*e.pattern, nullptr, 0) + " = " + iso_at(*e.iso, opts, 1, indent) +
           " " + value_at(*e.argument, nullptr, 2) + " in " + ext_at(*e.body, out_type, opts, indent);
  }
  std::string out;
  for (std::size_t i = 0; i < e.combo.size(); ++i) {
    const auto& s = e.combo[i];
    Amplitude amp = s.amplitude;
    if (i > 0) {
      // "a - b" parses back to the negation of b's amplitude.
      if (amp.kind() == Amplitude::Kind::Neg && amp.lhs().kind() != Amplitude::Kind::Integer) {
        out += " - ";
        amp = amp.lhs();
      } else if (amp.kind() == Amplitude::Kind::Integer && amp.integer_value() < 0) {
        out += " - ";
        amp = Amplitude::integer(-amp.integer_value());
      } else {
        out += " + ";
      }
    }
    if (!amp.is_literal_one()) out += amplitude_prefix(amp);
    out += value_at(*s.value, out_type, 0);
  }
  return out;
}

std::string iso_at(const IsoExpr& iso, const PrintOptions& opts, int level, const std::string& indent) {
  switch (iso.kind) {
    case IsoExpr::Kind::Var:
    case IsoExpr::Kind::Named:
      return iso.name;
    case IsoExpr::Kind::Lambda:
      return paren_if(level > 0, "\\" + iso.name + ". " + iso_at(*iso.body, opts, 0, indent));
    case IsoExpr::Kind::Fix:
      return paren_if(level > 0, "fix " + iso.name + ". " + iso_at(*iso.body, opts, 0, indent));
    case IsoExpr::Kind::App:
      return paren_if(level > 1,
                      iso_at(*iso.fn, opts, 1, indent) + " " + iso_at(*iso.arg, opts, 2, indent));
    case IsoExpr::Kind::Clauses: {
      const ValueType* in = nullptr;
      const ValueType* out = nullptr;
      if (opts.block_types) {
        auto it = opts.block_types->find(&iso);
        if (it != opts.block_types->end()) {
          in = it->second.first.get();
          out = it->second.second.get();
        }
      }
      std::string inner = indent + "  ";
      std::string s = "{ ";
      for (std::size_t i = 0; i < iso.clauses.size(); ++i) {
        const auto& c = iso.clauses[i];
        if (i > 0) s += "\n" + indent + "| ";
        s += value_at(*c.lhs, in, 0) + " <-> " + ext_at(*c.rhs, out, opts, inner);
      }
      return s + "\n" + indent + "}";
    }
  }
  return "?";
}

// ---- terms: 0 let, 1 sum, 2 scale, 3 cons, 4 application, 5 atom

std::string term_at(const Term& t, int level) {
  switch (t.kind) {
    case Term::Kind::Unit:
      return "()";
    case Term::Kind::Var:
      return t.name;
    case Term::Kind::InL:
    case Term::Kind::InR:
      if (t.first->kind == Term::Kind::Unit) return t.kind == Term::Kind::InL ? "tt" : "ff";
      return paren_if(level > 4, std::string(t.kind == Term::Kind::InL ? "inl " : "inr ") +
                                     term_at(*t.first, 5));
    case Term::Kind::Pair: {
      std::string out = "(" + term_at(*t.first, 0);
      const Term* rest = t.second.get();
      while (rest->kind == Term::Kind::Pair) {
        out += ", " + term_at(*rest->first, 0);
        rest = rest->second.get();
      }
      return out + ", " + term_at(*rest, 0) + ")";
    }
    case Term::Kind::IsoApp:
      return paren_if(level > 4, iso_at(*t.iso, {}, 1, "") + " " + term_at(*t.first, 5));
    case Term::Kind::Let:
      return paren_if(level > 0, "let " + value_at(*t.pattern, nullptr, 0) + " = " +
                                     term_at(*t.first, 0) + " in " + term_at(*t.second, 0));
    case Term::Kind::Sum:
      return paren_if(level > 1, term_at(*t.first, 1) + " + " + term_at(*t.second, 2));
    case Term::Kind::Scale:
      return paren_if(level > 2, amplitude_prefix(t.amplitude) + term_at(*t.first, 3));
  }
  return "?";
}

}  // namespace

std::string pretty_print(const ValueType& t) { return type_at(t, 0); }

std::string pretty_print(const IsoType& t) {
  if (t.kind == IsoType::Kind::Base) return type_at(*t.from, 0) + " <-> " + type_at(*t.to, 0);
  return "(" + pretty_print(*t.arg) + ") -> " + pretty_print(*t.result);
}

std::string pretty_print(const Value& v, const TypePtr& type) { return value_at(v, type.get(), 0); }

std::string pretty_print(const ExtendedValue& e, const TypePtr& type) {
  return ext_at(e, type.get(), {}, "");
}

std::string pretty_print(const IsoExpr& iso, const PrintOptions& options) {
  return iso_at(iso, options, 0, "");
}

std::string pretty_print(const Term& t) { return term_at(t, 0); }

std::string pretty_print(const Declaration& d, const PrintOptions& options) {
  return "iso " + d.name + " : " + pretty_print(*d.type) + " =\n  " +
         iso_at(*d.body, options, 0, "  ") + "\n";
}

std::string pretty_print(const Program& p, const PrintOptions& options) {
  std::string out;
  for (std::size_t i = 0; i < p.decls.size(); ++i) {
    if (i > 0) out += "\n";
    out += pretty_print(p.decls[i], options);
  }
  return out;
}

}  // namespace isoq
