// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <functional>

#include "isoq/denotation.hpp"
#include "isoq/inverter.hpp"
#include "isoq/parser.hpp"
#include "isoq/printer.hpp"
#include "isoq_test_support.hpp"

namespace isoq {
namespace {

const Program& full() {
  static const Program p = with_inverses(testing::stdlib());
  return p;
}

// Values of exactly `size` constructors, counted from the type grammar.
std::size_t exact_count(const ValueType& t, std::size_t size) {
  if (size == 0) return 0;
  switch (t.kind) {
    case ValueType::Kind::Unit:
      return size == 1 ? 1 : 0;
    case ValueType::Kind::Sum:
      return exact_count(*t.left, size - 1) + exact_count(*t.right, size - 1);
    case ValueType::Kind::Product: {
      std::size_t n = 0;
      for (std::size_t k = 1; k + 1 < size; ++k) n += exact_count(*t.left, k) * exact_count(*t.right, size - 1 - k);
      return n;
    }
    case ValueType::Kind::List: {
      // [] is inl () (size 2); h::t is inr (h, t).
      if (size == 2) return 1;
      if (size < 4) return 0;
      std::size_t n = 0;
      for (std::size_t k = 1; k + 3 < size; ++k) n += exact_count(*t.left, k) * exact_count(t, size - 2 - k);
      return n;
    }
    default:
      return 0;
  }
}

std::size_t count_upto(const std::string& type, std::size_t bound) {
  auto t = parse_type(type);
  std::size_t n = 0;
  for (std::size_t s = 1; s <= bound; ++s) n += exact_count(*t, s);
  return n;
}

TEST(Enumerate, CountsMatchIndependentCounter) {
  for (const char* type : {"1", "B", "B * B", "[1]", "[B]", "[B] * B", "B * [B]", "[B * B]", "[[1]]"}) {
    for (std::size_t bound = 0; bound <= 16; ++bound) {
      EXPECT_EQ(enumerate_values(parse_type(type), bound).size(), count_upto(type, bound)) << type << " " << bound;
    }
  }
}

TEST(Enumerate, ListOfUnitAtSeven) {
  auto b = enumerate_values(parse_type("[1]"), 7);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(pretty_print(*b.values[0], parse_type("[1]")), "[]");
  EXPECT_EQ(pretty_print(*b.values[1], parse_type("[1]")), "[()]");
}

TEST(Enumerate, CanonicalOrderAndIndex) {
  auto b = enumerate_values(parse_type("[B] * B"), 21);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    EXPECT_TRUE(canonical_compare(*b.values[i], *b.values[i + 1]) < 0);
    EXPECT_EQ(b.find(b.values[i]), i);
  }
  EXPECT_FALSE(b.find(*term_as_value(parse_term("([tt, tt, tt, tt, tt], tt)"))));
}

TEST(Enumerate, OpenTypeRejected) { EXPECT_THROW(enumerate_values(parse_type("a"), 3), std::invalid_argument); }

TEST(Denote, HadamardMatrix) {
  auto m = denote(IsoExpr::named("had"), 3, full());
  const double s = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(m.at(0, 0) - s), 0, 1e-12);
  EXPECT_NEAR(std::abs(m.at(1, 0) - s), 0, 1e-12);
  EXPECT_NEAR(std::abs(m.at(0, 1) - s), 0, 1e-12);
  EXPECT_NEAR(std::abs(m.at(1, 1) + s), 0, 1e-12);
}

TEST(Denote, GateMatchesGolden) {
  auto m = denote(IsoExpr::named("gate"), 11, full());
  auto golden = testing::read_matrix_csv(testing::read_text(testing::golden_path("gate.csv")));
  auto type = parse_type("B * B");
  std::map<std::pair<std::string, std::string>, std::complex<double>> expected;
  for (const auto& e : golden) expected[{e.row, e.column}] = e.value;
  for (std::size_t r = 0; r < m.out.size(); ++r) {
    for (std::size_t c = 0; c < m.in.size(); ++c) {
      auto key = std::make_pair(pretty_print(*m.out.values[r], type), pretty_print(*m.in.values[c], type));
      auto want = expected.count(key) ? expected[key] : std::complex<double>{};
      EXPECT_NEAR(std::abs(m.at(r, c) - want), 0, 1e-12) << key.first << " " << key.second;
    }
  }
  auto csv = testing::read_matrix_csv(matrix_to_csv(m));
  EXPECT_EQ(csv.size(), golden.size());
}

TEST(Isometry, StdlibIsosAreUnitary) {
  for (const char* name : {"not", "had", "gate", "cnot", "phase", "swap"}) {
    auto r = check_isometry(denote(IsoExpr::named(name), 11, full()));
    EXPECT_TRUE(r.conclusive) << name;
    EXPECT_LT(r.isometry, 1e-12) << name;
    ASSERT_TRUE(r.coisometry) << name;
    EXPECT_LT(*r.coisometry, 1e-12) << name;
  }
}

TEST(Isometry, CorruptedEntryIsDetected) {
  auto m = denote(IsoExpr::named("gate"), 11, full());
  m.entries[{0, 0}] = 1.0;
  auto r = check_isometry(m);
  EXPECT_GE(r.isometry, 0.25);
  EXPECT_FALSE(r.ok(1e-9));
}

TEST(Isometry, LengthChangingIsoLeaks) {
  auto p = testing::fixture("length_changing.iso");
  auto m = denote(IsoExpr::named("consR"), 4, p);
  ASSERT_EQ(m.overflow.size(), 1u);
  EXPECT_FALSE(check_isometry(m).conclusive);
}

TEST(Blocks, MaphadBlocksAreTensorPowers) {
  auto m = denote(IsoExpr::named("maphad"), 18, full());
  auto report = block_decompose(m);
  EXPECT_TRUE(report.path.empty());
  EXPECT_LT(report.off_block, 1e-12);
  ASSERT_EQ(report.blocks.size(), 5u);
  for (const auto& b : report.blocks) {
    EXPECT_EQ(b.dim_in, std::size_t{1} << b.length);
    EXPECT_TRUE(b.surjective);
    auto dense = dense_block(m, report.path, b.length);
    auto h = testing::hadamard_power(b.length);
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t j = 0; j < h.size(); ++j) EXPECT_NEAR(std::abs(dense[i][j] - h[i][j]), 0, 1e-12);
    }
  }
}

TEST(Blocks, CnotstarPathAndSizes) {
  auto m = denote(IsoExpr::named("cnotstar"), 21, full());
  auto report = block_decompose(m);
  EXPECT_EQ(report.path, std::vector<int>{0});
  ASSERT_EQ(report.blocks.size(), 5u);
  for (const auto& b : report.blocks) EXPECT_EQ(b.dim_in, std::size_t{2} << b.length);
  EXPECT_TRUE(report.ok(1e-12));
}

TEST(Blocks, ShapeErrorWithoutList) {
  EXPECT_THROW(block_decompose(denote(IsoExpr::named("had"), 3, full())), ShapeError);
}

TEST(Truncation, LargerBoundsExtendSmallerOnes) {
  auto small = denote(IsoExpr::named("maphad"), 10, full());
  auto big = denote(IsoExpr::named("maphad"), 14, full());
  for (const auto& [rc, a] : small.entries) {
    auto r = big.out.find(small.out.values[rc.first]);
    auto c = big.in.find(small.in.values[rc.second]);
    ASSERT_TRUE(r && c);
    EXPECT_NEAR(std::abs(big.at(*r, *c) - a), 0, 1e-15);
  }
}

TEST(Adjoint, InverseIsConjugateTranspose) {
  for (const char* name : {"had", "gate", "phase", "maphad", "cnotstar"}) {
    auto m = denote(IsoExpr::named(name), 14, full());
    auto inv = denote(IsoExpr::named(inverse_name(name)), 14, full());
    EXPECT_LT(adjoint_deviation(m, inv), 1e-12) << name;
  }
}

TEST(Json, SchemaTagAndStability) {
  auto m = denote(IsoExpr::named("gate"), 11, full());
  auto a = matrix_to_json(m, check_isometry(m), std::nullopt);
  auto b = matrix_to_json(denote(IsoExpr::named("gate"), 11, full()), check_isometry(m), std::nullopt);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"isoq/1\""), std::string::npos);
}

}  // namespace
}  // namespace isoq
