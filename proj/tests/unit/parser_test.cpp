// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <functional>

#include "isoq/parser.hpp"
#include "isoq_test_support.hpp"

namespace isoq {
namespace {

TEST(Parser, NotHasTwoClauses) {
  auto p = parse_program("iso not : B <-> B { ff <-> tt | tt <-> ff }");
  ASSERT_EQ(p.decls.size(), 1u);
  const auto& body = *p.decls[0].body;
  ASSERT_EQ(body.kind, IsoExpr::Kind::Clauses);
  EXPECT_EQ(body.clauses.size(), 2u);
  EXPECT_TRUE(value_equal(*body.clauses[0].lhs, *Value::ff()));
}

TEST(Parser, HadamardAmplitudes) {
  auto p = parse_program(
      "iso had : B <-> B { tt <-> (1/sqrt(2))*tt + (1/sqrt(2))*ff | ff <-> (1/sqrt(2))*tt + (-1/sqrt(2))*ff }");
  const auto& c = p.decls[0].body->clauses[1];
  ASSERT_EQ(c.rhs->combo.size(), 2u);
  EXPECT_NEAR(c.rhs->combo[0].amplitude.eval().real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(c.rhs->combo[1].amplitude.eval().real(), -1 / std::sqrt(2.0), 1e-15);
}

TEST(Parser, UnclosedBlockIsAnError) { EXPECT_THROW(parse_program("iso f : B <-> B = { tt <-> tt"), ParseError); }

TEST(Parser, ErrorCarriesPosition) {
  try {
    parse_program("iso f : B <-> B =\n  { tt <-> }");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parser, DuplicateDeclarationsRejected) {
  EXPECT_THROW(parse_program("iso f : B <-> B = { x <-> x }\niso f : B <-> B = { x <-> x }"), ParseError);
}

TEST(ParseTerm, ListSugarExpands) {
  auto t = parse_term("(tt, ff::[])");
  auto v = term_as_value(t);
  ASSERT_TRUE(v.has_value());
  EXPECT_TRUE(value_equal(**v, *Value::pair(Value::tt(), Value::list({Value::ff()}))));
}

TEST(ParseTerm, SumOfScales) {
  auto t = parse_term("(1/sqrt(2))*tt + (1/sqrt(2))*ff");
  ASSERT_EQ(t->kind, Term::Kind::Sum);
  EXPECT_EQ(t->first->kind, Term::Kind::Scale);
  EXPECT_EQ(t->second->kind, Term::Kind::Scale);
}

TEST(ParseTerm, InjectionNeedsArgument) { EXPECT_THROW(parse_term("inl inr"), ParseError); }

TEST(ParseTerm, ApplicationChain) {
  auto t = parse_term("map not [tt]");
  ASSERT_EQ(t->kind, Term::Kind::IsoApp);
  EXPECT_EQ(t->iso->kind, IsoExpr::Kind::App);
}

TEST(ParseTerm, CommentsAreSkipped) {
  auto t = parse_term("tt -- trailing\n");
  EXPECT_TRUE(term_as_value(t).has_value());
}

TEST(ParseType, ProductBindsTighterThanSum) {
  auto t = parse_type("1 + B * B");
  ASSERT_EQ(t->kind, ValueType::Kind::Sum);
  EXPECT_EQ(t->right->kind, ValueType::Kind::Product);
}

TEST(ParseIsoType, ArrowType) {
  auto t = parse_iso_type("(a <-> b) -> [a] <-> [b]");
  ASSERT_EQ(t->kind, IsoType::Kind::Arrow);
  EXPECT_EQ(t->result->from->kind, ValueType::Kind::List);
}

TEST(ResolveNames, DeclarationsBecomeNamed) {
  auto t = resolve_names(parse_term("not tt"), testing::stdlib());
  EXPECT_EQ(t->iso->kind, IsoExpr::Kind::Named);
}

// Every construct of the surface language occurs somewhere in the stdlib.
TEST(Corpus, StdlibReachesEveryProduction) {
  std::set<std::string> seen;
  std::function<void(const ValueType&)> type = [&](const ValueType& t) {
    seen.insert("type" + std::to_string(static_cast<int>(t.kind)));
    if (t.left) type(*t.left);
    if (t.right) type(*t.right);
  };
  std::function<void(const Value&)> value = [&](const Value& v) {
    seen.insert("value" + std::to_string(static_cast<int>(v.kind)));
    if (v.first) value(*v.first);
    if (v.second) value(*v.second);
  };
  std::function<void(const Amplitude&)> amp = [&](const Amplitude& a) {
    seen.insert("amp" + std::to_string(static_cast<int>(a.kind())));
    switch (a.kind()) {
      case Amplitude::Kind::Integer:
      case Amplitude::Kind::Imag:
        return;
      case Amplitude::Kind::Sqrt:
      case Amplitude::Kind::Neg:
        amp(a.lhs());
        return;
      default:
        amp(a.lhs());
        amp(a.rhs());
    }
  };
  std::function<void(const IsoExpr&)> iso;
  std::function<void(const ExtendedValue&)> ext = [&](const ExtendedValue& e) {
    seen.insert("ext" + std::to_string(static_cast<int>(e.kind)));
    if (e.kind == ExtendedValue::Kind::Let) {
      value(*e.pattern);
      iso(*e.iso);
      value(*e.argument);
      ext(*e.body);
      return;
    }
    for (const auto& s : e.combo) {
      amp(s.amplitude);
      value(*s.value);
    }
  };
  iso = [&](const IsoExpr& w) {
    seen.insert("iso" + std::to_string(static_cast<int>(w.kind)));
    for (const auto& c : w.clauses) {
      value(*c.lhs);
      ext(*c.rhs);
    }
    if (w.body) iso(*w.body);
    if (w.fn) iso(*w.fn);
    if (w.arg) iso(*w.arg);
  };
  std::function<void(const IsoType&)> isotype = [&](const IsoType& t) {
    seen.insert("isotype" + std::to_string(static_cast<int>(t.kind)));
    if (t.kind == IsoType::Kind::Base) {
      type(*t.from);
      type(*t.to);
    } else {
      isotype(*t.arg);
      isotype(*t.result);
    }
  };
  for (const auto& d : testing::stdlib().decls) {
    isotype(*d.type);
    iso(*d.body);
  }
  for (int k = 0; k < 5; ++k) EXPECT_TRUE(seen.count("type" + std::to_string(k))) << "type kind " << k;
  for (int k = 0; k < 5; ++k) EXPECT_TRUE(seen.count("value" + std::to_string(k))) << "value kind " << k;
  for (int k = 0; k < 2; ++k) EXPECT_TRUE(seen.count("ext" + std::to_string(k))) << "ext kind " << k;
  for (int k = 0; k < 6; ++k) EXPECT_TRUE(seen.count("iso" + std::to_string(k))) << "iso kind " << k;
  for (int k = 0; k < 2; ++k) EXPECT_TRUE(seen.count("isotype" + std::to_string(k))) << "isotype kind " << k;
  for (auto k : {Amplitude::Kind::Integer, Amplitude::Kind::Imag, Amplitude::Kind::Sqrt, Amplitude::Kind::Div}) {
    EXPECT_TRUE(seen.count("amp" + std::to_string(static_cast<int>(k))));
  }
  auto text = testing::read_text(ISOQ_STDLIB_PATH);
  for (const char* token : {"[]", "::", "[x]", "tt", "ff", "()", "--", "fix", "\\", "let", " - ", "(1 + 1)"}) {
    EXPECT_NE(text.find(token), std::string::npos) << token;
  }
}

}  // namespace
}  // namespace isoq
