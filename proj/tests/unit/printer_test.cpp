// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "isoq/parser.hpp"
#include "isoq/printer.hpp"
#include "isoq/typechecker.hpp"
#include "isoq_test_support.hpp"

namespace isoq {
namespace {

std::string squash(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

TEST(Printer, HadamardRoundTripsModuloWhitespace) {
  const auto* had = testing::stdlib().find("had");
  auto text = pretty_print(*had);
  EXPECT_EQ(squash(text), squash("iso had : B <-> B = { tt <-> 1/sqrt(2)*tt + 1/sqrt(2)*ff "
                                 "| ff <-> 1/sqrt(2)*tt + (-1)/sqrt(2)*ff }"));
}

TEST(Printer, ListResugaring) {
  auto v = Value::inr(Value::pair(Value::unit(), Value::inl(Value::unit())));
  EXPECT_EQ(pretty_print(*v, ValueType::list(ValueType::unit())), "[()]");
  EXPECT_EQ(pretty_print(*Value::list({Value::tt(), Value::ff()}), ValueType::list(ValueType::boolean())),
            "[tt, ff]");
}

TEST(Printer, OpenListTail) {
  auto v = Value::cons(Value::var("h"), Value::var("t"));
  EXPECT_EQ(pretty_print(*v, ValueType::list(ValueType::boolean())), "h::t");
}

TEST(Printer, CnotIsThreeClauses) {
  auto text = pretty_print(*testing::stdlib().find("cnot"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '|'), 2);
  EXPECT_NE(text.find("(tt, tt) <-> (tt, ff)"), std::string::npos);
}

TEST(Printer, StdlibRoundTripIsAlphaEquivalent) {
  const auto& p = testing::stdlib();
  auto result = check_program(p);
  ASSERT_TRUE(result.ok());
  auto blocks = result.block_types();
  PrintOptions options;
  options.block_types = &blocks;
  auto reparsed = parse_program(pretty_print(p, options));
  EXPECT_TRUE(alpha_equivalent(reparsed, p));
  // Untyped printing is also parseable.
  EXPECT_TRUE(alpha_equivalent(parse_program(pretty_print(p)), p));
}

TEST(Printer, NegativeAmplitudesNeverOpenComments) {
  auto a = -(-Amplitude::integer(1) / Amplitude::sqrt(Amplitude::integer(2)));
  auto t = Term::scale(a, Term::unit());
  EXPECT_EQ(pretty_print(*t).find("--"), std::string::npos);
}

TEST(Printer, Terms) {
  EXPECT_EQ(pretty_print(*parse_term("let (x, y) = f z in (y, x)")), "let (x, y) = f z in (y, x)");
  EXPECT_EQ(pretty_print(*parse_term("2*tt + ff")), "2*tt + ff");
}

TEST(Printer, Types) {
  EXPECT_EQ(pretty_print(*parse_type("(1 + 1) * [B]")), "B * [B]");
  EXPECT_EQ(pretty_print(*parse_type("(1 * 1) + 1")), "1 * 1 + 1");
  EXPECT_EQ(pretty_print(*parse_iso_type("(a <-> b) -> [a] <-> [b]")), "(a <-> b) -> [a] <-> [b]");
}

}  // namespace
}  // namespace isoq
