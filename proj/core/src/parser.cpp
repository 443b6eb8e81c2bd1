// SPDX-License-Identifier: Apache-2.0
#include "isoq/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace isoq {

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const std::set<std::string, std::less<>> kKeywords = {"iso", "let", "in",  "fix",  "inl",
                                                      "inr", "tt",  "ff",  "sqrt", "B"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  static const char* const multi[] = {"<->", "->", "::"};
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line;
    int cl = col;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* m : multi) {
      std::string_view ms(m);
      if (src.substr(i, ms.size()) == ms) {
        out.push_back({Tok::Symbol, std::string(ms), l, cl});
        advance(ms.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("{}|()[],+-*/.=\\:").find(c) != std::string_view::npos) {
      out.push_back({Tok::Symbol, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    throw ParseError(l, cl, {"a token"}, "'" + std::string(1, c) + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Fail {};

Amplitude negate(const Amplitude& a) {
  if (a.kind() == Amplitude::Kind::Integer) return Amplitude::integer(-a.integer_value());
  return -a;
}

struct TermAtom {
  TermPtr term;
  IsoPtr iso;
};

IsoPtr term_to_iso(const TermPtr& t) {
  if (!t) return nullptr;
  if (t->kind == Term::Kind::Var) return IsoExpr::var(t->name, t->span);
  if (t->kind == Term::Kind::IsoApp) {
    auto arg = term_to_iso(t->first);
    if (!arg) return nullptr;
    return IsoExpr::app(t->iso, arg, t->span);
  }
  return nullptr;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program program() {
    return run([&] {
      Program p;
      std::set<std::string> names;
      while (!at_end()) {
        Span span = here();
        expect_keyword("iso");
        const Token& name_tok = cur();
        std::string name = ident("declaration name");
        if (names.count(name)) {
          throw ParseError(name_tok.line, name_tok.column, {"a fresh declaration name"},
                           "duplicate '" + name + "'");
        }
        expect(":");
        auto type = iso_type();
        accept("=");
        auto body = iso();
        body = resolve(body, {}, names);
        names.insert(name);
        p.decls.push_back(Declaration{name, type, body, span});
      }
      return p;
    });
  }

  TermPtr whole_term() {
    return run([&] {
      auto t = term();
      expect_end();
      return t;
    });
  }

  TypePtr whole_type() {
    return run([&] {
      auto t = vtype();
      expect_end();
      return t;
    });
  }

  IsoTypePtr whole_iso_type() {
    return run([&] {
      auto t = iso_type();
      expect_end();
      return t;
    });
  }

  static IsoPtr resolve(const IsoPtr& iso, std::set<std::string> bound,
                        const std::set<std::string>& names) {
    switch (iso->kind) {
      case IsoExpr::Kind::Var:
        if (!bound.count(iso->name) && names.count(iso->name)) {
          return IsoExpr::named(iso->name, iso->span);
        }
        return iso;
      case IsoExpr::Kind::Named:
        return iso;
      case IsoExpr::Kind::Lambda:
      case IsoExpr::Kind::Fix: {
        bound.insert(iso->name);
        auto body = resolve(iso->body, bound, names);
        return iso->kind == IsoExpr::Kind::Lambda ? IsoExpr::lambda(iso->name, body, iso->span)
                                                  : IsoExpr::fix(iso->name, body, iso->span);
      }
      case IsoExpr::Kind::App:
        return IsoExpr::app(resolve(iso->fn, bound, names), resolve(iso->arg, bound, names),
                            iso->span);
      case IsoExpr::Kind::Clauses: {
        std::vector<Clause> clauses;
        for (const auto& c : iso->clauses) {
          clauses.push_back(Clause{c.lhs, resolve_ext(c.rhs, bound, names), c.span});
        }
        return IsoExpr::block(std::move(clauses), iso->span);
      }
    }
    return iso;
  }

  static ExtPtr resolve_ext(const ExtPtr& e, const std::set<std::string>& bound,
                            const std::set<std::string>& names) {
    if (e->kind == ExtendedValue::Kind::Combo) return e;
    return ExtendedValue::let(e->pattern, resolve(e->iso, bound, names), e->argument,
                              resolve_ext(e->body, bound, names), e->span);
  }

  static TermPtr resolve_term(const TermPtr& t, const std::set<std::string>& names) {
    if (!t) return t;
    switch (t->kind) {
      case Term::Kind::Unit:
      case Term::Kind::Var:
        return t;
      case Term::Kind::InL:
        return Term::inl(resolve_term(t->first, names), t->span);
      case Term::Kind::InR:
        return Term::inr(resolve_term(t->first, names), t->span);
      case Term::Kind::Pair:
        return Term::pair(resolve_term(t->first, names), resolve_term(t->second, names), t->span);
      case Term::Kind::Sum:
        return Term::sum(resolve_term(t->first, names), resolve_term(t->second, names), t->span);
      case Term::Kind::Scale:
        return Term::scale(t->amplitude, resolve_term(t->first, names), t->span);
      case Term::Kind::IsoApp:
        return Term::apply(resolve(t->iso, {}, names), resolve_term(t->first, names), t->span);
      case Term::Kind::Let:
        return Term::let(t->pattern, resolve_term(t->first, names), resolve_term(t->second, names),
                         t->span);
    }
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t furthest_ = 0;
  std::vector<std::string> expected_;

  template <typename F>
  auto run(F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Fail&) {
      const Token& t = toks_[std::min(furthest_, toks_.size() - 1)];
      std::vector<std::string> exp = expected_;
      std::sort(exp.begin(), exp.end());
      exp.erase(std::unique(exp.begin(), exp.end()), exp.end());
      throw ParseError(t.line, t.column, exp, describe(t));
    }
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek_tok(std::size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Span here() const { return Span{cur().line, cur().column}; }
  bool at_end() const { return cur().kind == Tok::End; }

  [[noreturn]] void fail(const std::string& what) {
    if (pos_ > furthest_) {
      furthest_ = pos_;
      expected_.clear();
    }
    if (pos_ == furthest_) expected_.push_back(what);
    throw Fail{};
  }

  bool is_sym(std::string_view s) const { return cur().kind == Tok::Symbol && cur().text == s; }
  bool is_kw(std::string_view s) const { return cur().kind == Tok::Ident && cur().text == s; }
  bool is_plain_ident() const { return cur().kind == Tok::Ident && !kKeywords.count(cur().text); }

  bool accept(std::string_view s) {
    if (is_sym(s)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("'" + std::string(s) + "'");
  }

  bool accept_keyword(std::string_view s) {
    if (is_kw(s)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_keyword(std::string_view s) {
    if (!accept_keyword(s)) fail("'" + std::string(s) + "'");
  }

  void expect_end() {
    if (!at_end()) fail("end of input");
  }

  std::string ident(const std::string& what) {
    if (!is_plain_ident()) fail(what);
    return toks_[pos_++].text;
  }

  // Tries `f`; on failure rewinds and returns nullopt.
  template <typename F>
  auto attempt(F&& f) -> std::optional<decltype(f())> {
    std::size_t save = pos_;
    try {
      return f();
    } catch (const Fail&) {
      pos_ = save;
      return std::nullopt;
    }
  }

  // ---- types

  TypePtr vtype() {
    auto left = vprod();
    if (accept("+")) return ValueType::sum(left, vtype());
    return left;
  }

  TypePtr vprod() {
    auto left = vatom();
    if (accept("*")) return ValueType::product(left, vprod());
    return left;
  }

  TypePtr vatom() {
    if (cur().kind == Tok::Number && cur().text == "1") {
      ++pos_;
      return ValueType::unit();
    }
    if (accept_keyword("B")) return ValueType::boolean();
    if (accept("[")) {
      auto elem = vtype();
      expect("]");
      return ValueType::list(elem);
    }
    if (accept("(")) {
      auto t = vtype();
      expect(")");
      return t;
    }
    if (is_plain_ident()) return ValueType::var(toks_[pos_++].text);
    fail("a type");
  }

  IsoTypePtr iso_type() {
    auto arrow = attempt([&] {
      expect("(");
      auto a = vtype();
      expect("<->");
      auto b = vtype();
      expect(")");
      expect("->");
      return IsoType::arrow(IsoType::base(a, b), iso_type());
    });
    if (arrow) return *arrow;
    auto a = vtype();
    expect("<->");
    auto b = vtype();
    return IsoType::base(a, b);
  }

  // ---- values

  ValuePtr value() {
    Span span = here();
    auto head = value_prefix();
    if (accept("::")) return Value::inr(Value::pair(head, value(), span), span);
    return head;
  }

  ValuePtr value_prefix() {
    Span span = here();
    if (accept_keyword("inl")) return Value::inl(value_prefix(), span);
    if (accept_keyword("inr")) return Value::inr(value_prefix(), span);
    return value_atom();
  }

  ValuePtr value_atom() {
    Span span = here();
    if (accept("(")) {
      if (accept(")")) return Value::unit(span);
      std::vector<ValuePtr> elems{value()};
      while (accept(",")) elems.push_back(value());
      expect(")");
      return tuple(elems, span);
    }
    if (accept("[")) {
      if (accept("]")) return Value::inl(Value::unit(span), span);
      std::vector<ValuePtr> elems{value()};
      while (accept(",")) elems.push_back(value());
      expect("]");
      ValuePtr out = Value::inl(Value::unit(span), span);
      for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
        out = Value::inr(Value::pair(*it, out, (*it)->span), (*it)->span);
      }
      return out;
    }
    if (accept_keyword("tt")) return Value::inl(Value::unit(span), span);
    if (accept_keyword("ff")) return Value::inr(Value::unit(span), span);
    if (is_plain_ident()) return Value::var(toks_[pos_++].text, span);
    fail("a value");
  }

  static ValuePtr tuple(const std::vector<ValuePtr>& elems, Span span) {
    ValuePtr out = elems.back();
    for (std::size_t i = elems.size() - 1; i-- > 0;) out = Value::pair(elems[i], out, span);
    return out;
  }

  // ---- scalars

  Amplitude number(bool negative) {
    const Token& t = cur();
    if (t.kind != Tok::Number) fail("a number");
    ++pos_;
    try {
      auto dot = t.text.find('.');
      if (dot == std::string::npos) {
        auto n = std::stoll(t.text);
        return Amplitude::integer(negative ? -n : n);
      }
      std::string digits = t.text.substr(0, dot) + t.text.substr(dot + 1);
      std::int64_t den = 1;
      for (std::size_t k = dot + 1; k < t.text.size(); ++k) {
        if (den > 100000000000000000) throw std::out_of_range("decimal");
        den *= 10;
      }
      auto num = std::stoll(digits);
      return Amplitude::rational(negative ? -num : num, den);
    } catch (const std::out_of_range&) {
      --pos_;
      fail("a number that fits in 64 bits");
    }
  }

  Amplitude scalar_factor() {
    if (accept("-")) {
      if (cur().kind == Tok::Number) return number(true);
      return -scalar_factor();
    }
    if (cur().kind == Tok::Number) return number(false);
    if (cur().kind == Tok::Ident && cur().text == "i") {
      ++pos_;
      return Amplitude::imag();
    }
    if (accept_keyword("sqrt")) {
      expect("(");
      std::size_t at = pos_;
      auto r = scalar_expr();
      expect(")");
      auto v = r.eval();
      if (v.imag() != 0.0 || v.real() < 0.0) {
        pos_ = at;
        fail("a nonnegative radicand");
      }
      return Amplitude::sqrt(r);
    }
    if (accept("(")) {
      auto a = scalar_expr();
      expect(")");
      return a;
    }
    fail("a scalar");
  }

  Amplitude scalar_term() {
    auto acc = scalar_factor();
    while (is_sym("*") || is_sym("/")) {
      std::size_t save = pos_;
      bool mul = is_sym("*");
      ++pos_;
      auto rhs = attempt([&] { return scalar_factor(); });
      if (!rhs) {
        pos_ = save;
        break;
      }
      if (mul) {
        acc = acc * *rhs;
      } else {
        if (rhs->eval() == std::complex<double>(0.0, 0.0)) {
          pos_ = save + 1;
          fail("a nonzero divisor");
        }
        acc = acc / *rhs;
      }
    }
    return acc;
  }

  Amplitude scalar_expr() {
    auto acc = scalar_term();
    while (is_sym("+") || is_sym("-")) {
      std::size_t save = pos_;
      bool plus = is_sym("+");
      ++pos_;
      auto rhs = attempt([&] { return scalar_term(); });
      if (!rhs) {
        pos_ = save;
        break;
      }
      acc = plus ? acc + *rhs : acc - *rhs;
    }
    return acc;
  }

  // `scalar *` prefix of a summand, if present.
  std::optional<Amplitude> scalar_prefix() {
    return attempt([&] {
      auto a = scalar_term();
      expect("*");
      return a;
    });
  }

  // ---- isos

  bool starts_iso_atom() const {
    return is_sym("{") || is_sym("\\") || is_kw("fix") || is_sym("(") || is_plain_ident();
  }

  IsoPtr iso() {
    auto acc = iso_atom();
    while (starts_iso_atom()) {
      Span span = here();
      acc = IsoExpr::app(acc, iso_atom(), span);
    }
    return acc;
  }

  IsoPtr iso_atom() {
    Span span = here();
    if (accept("{")) return clause_block(span);
    if (accept("\\")) {
      auto binder = ident("an iso variable");
      expect(".");
      return IsoExpr::lambda(binder, iso(), span);
    }
    if (accept_keyword("fix")) {
      auto binder = ident("an iso variable");
      expect(".");
      return IsoExpr::fix(binder, iso(), span);
    }
    if (accept("(")) {
      auto i = iso();
      expect(")");
      return i;
    }
    if (is_plain_ident()) return IsoExpr::var(toks_[pos_++].text, span);
    fail("an iso");
  }

  IsoPtr clause_block(Span span) {
    std::vector<Clause> clauses;
    accept("|");
    clauses.push_back(clause());
    while (accept("|")) clauses.push_back(clause());
    expect("}");
    return IsoExpr::block(std::move(clauses), span);
  }

  Clause clause() {
    Span span = here();
    auto lhs = value();
    expect("<->");
    auto rhs = ext_value();
    return Clause{lhs, rhs, span};
  }

  ExtPtr ext_value() {
    Span span = here();
    if (accept_keyword("let")) {
      auto pattern = value();
      expect("=");
      IsoPtr fn;
      ValuePtr arg;
      while (true) {
        if (fn) {
          auto a = attempt([&] {
            auto v = value();
            if (!is_kw("in")) fail("'in'");
            return v;
          });
          if (a) {
            arg = *a;
            break;
          }
        }
        Span at = here();
        auto atom = iso_atom();
        fn = fn ? IsoExpr::app(fn, atom, at) : atom;
      }
      expect_keyword("in");
      return ExtendedValue::let(pattern, fn, arg, ext_value(), span);
    }
    std::vector<Summand> summands{summand()};
    while (true) {
      if (accept("+")) {
        summands.push_back(summand());
      } else if (accept("-")) {
        auto s = summand();
        s.amplitude = negate(s.amplitude);
        summands.push_back(s);
      } else {
        break;
      }
    }
    return ExtendedValue::combination(std::move(summands), span);
  }

  Summand summand() {
    auto amp = scalar_prefix();
    auto v = value();
    return Summand{amp ? *amp : Amplitude(), v};
  }

  // ---- terms

  TermPtr term() {
    Span span = here();
    if (accept_keyword("let")) {
      auto pattern = value();
      expect("=");
      auto bound = term();
      expect_keyword("in");
      return Term::let(pattern, bound, term(), span);
    }
    auto acc = scaled_term();
    while (true) {
      Span at = here();
      if (accept("+")) {
        acc = Term::sum(acc, scaled_term(), at);
      } else if (accept("-")) {
        auto t = scaled_term();
        if (t->kind == Term::Kind::Scale) {
          t = Term::scale(negate(t->amplitude), t->first, t->span);
        } else {
          t = Term::scale(Amplitude::integer(-1), t, t->span);
        }
        acc = Term::sum(acc, t, at);
      } else {
        return acc;
      }
    }
  }

  TermPtr scaled_term() {
    Span span = here();
    if (auto amp = scalar_prefix()) return Term::scale(*amp, cons_term(), span);
    return cons_term();
  }

  TermPtr cons_term() {
    Span span = here();
    auto head = app_term();
    if (accept("::")) return Term::inr(Term::pair(head, cons_term(), span), span);
    return head;
  }

  bool starts_term_atom() const {
    return is_kw("inl") || is_kw("inr") || is_kw("tt") || is_kw("ff") || is_sym("[") ||
           is_sym("(") || is_sym("{") || is_sym("\\") || is_kw("fix") || is_plain_ident();
  }

  TermPtr app_term() {
    Span span = here();
    std::vector<std::size_t> starts{pos_};
    std::vector<TermAtom> atoms{term_atom()};
    while (starts_term_atom()) {
      starts.push_back(pos_);
      atoms.push_back(term_atom());
    }
    if (!atoms.back().term) fail("a term argument");
    if (atoms.size() == 1) return atoms.front().term;
    IsoPtr fn;
    for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
      if (!atoms[k].iso) {
        const Token& t = toks_[starts[k]];
        throw ParseError(t.line, t.column, {"an iso in function position"}, describe(t));
      }
      fn = fn ? IsoExpr::app(fn, atoms[k].iso, span) : atoms[k].iso;
    }
    return Term::apply(fn, atoms.back().term, span);
  }

  TermPtr term_operand() {
    auto a = term_atom();
    if (!a.term) fail("a term");
    return a.term;
  }

  TermAtom term_atom() {
    Span span = here();
    if (accept_keyword("inl")) return {Term::inl(term_operand(), span), nullptr};
    if (accept_keyword("inr")) return {Term::inr(term_operand(), span), nullptr};
    if (accept_keyword("tt")) return {Term::inl(Term::unit(span), span), nullptr};
    if (accept_keyword("ff")) return {Term::inr(Term::unit(span), span), nullptr};
    if (accept("[")) {
      TermPtr out = Term::inl(Term::unit(span), span);
      if (accept("]")) return {out, nullptr};
      std::vector<TermPtr> elems{term()};
      while (accept(",")) elems.push_back(term());
      expect("]");
      for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
        out = Term::inr(Term::pair(*it, out, (*it)->span), (*it)->span);
      }
      return {out, nullptr};
    }
    if (is_sym("(")) {
      auto as_term = attempt([&] {
        expect("(");
        if (accept(")")) return Term::unit(span);
        std::vector<TermPtr> elems{term()};
        while (accept(",")) elems.push_back(term());
        expect(")");
        TermPtr out = elems.back();
        for (std::size_t i = elems.size() - 1; i-- > 0;) out = Term::pair(elems[i], out, span);
        return out;
      });
      if (as_term) return {*as_term, term_to_iso(*as_term)};
      expect("(");
      auto i = iso();
      expect(")");
      return {nullptr, i};
    }
    if (is_sym("{") || is_sym("\\") || is_kw("fix")) return {nullptr, iso_atom()};
    if (is_plain_ident()) {
      const auto& name = toks_[pos_++].text;
      return {Term::var(name, span), IsoExpr::var(name, span)};
    }
    fail("a term");
  }
};

std::set<std::string> decl_names(const Program& program) {
  std::set<std::string> names;
  for (const auto& d : program.decls) names.insert(d.name);
  return names;
}

}  // namespace

Program parse_program(std::string_view source) { return Parser(source).program(); }

TermPtr parse_term(std::string_view source) { return Parser(source).whole_term(); }

TypePtr parse_type(std::string_view source) { return Parser(source).whole_type(); }

IsoTypePtr parse_iso_type(std::string_view source) { return Parser(source).whole_iso_type(); }

TermPtr resolve_names(const TermPtr& term, const Program& program) {
  return Parser::resolve_term(term, decl_names(program));
}

IsoPtr resolve_names(const IsoPtr& iso, const Program& program) {
  return Parser::resolve(iso, {}, decl_names(program));
}

}  // namespace isoq
