// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "isoq_cli/cli.hpp"
#include "isoq_test_support.hpp"

namespace isoq {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kLib = ISOQ_STDLIB_PATH;

TEST(Cli, CheckStdlib) {
  auto r = run({"check", kLib});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ok:"), std::string::npos);
}

TEST(Cli, CheckJsonReportsWitness) {
  auto r = run({"check", testing::fixture_path("nonexhaustive.iso"), "--json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("NonExhaustive"), std::string::npos);
  EXPECT_NE(r.out.find("([tt], tt)"), std::string::npos);
}

TEST(Cli, CheckClassicalMode) {
  EXPECT_EQ(run({"check", kLib, "--mode", "classical"}).code, 1);
  EXPECT_EQ(run({"check", kLib, "--mode", "sideways"}).code, 2);
}

TEST(Cli, SyntaxErrorExitsTwo) {
  auto r = run({"check", testing::fixture_path("syntax_error.iso")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, MissingFile) { EXPECT_NE(run({"check", "/nonexistent/file.iso"}).code, 0); }

TEST(Cli, UnknownCommand) { EXPECT_EQ(run({"frobnicate"}).code, 2); }

TEST(Cli, RunHadamard) {
  auto r = run({"run", kLib, "--iso", "had", "--term", "tt"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("tt: 0.707106781187"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("ff: 0.707106781187"), std::string::npos) << r.out;
}

TEST(Cli, RunIsoExpression) {
  auto r = run({"run", kLib, "--iso", "ctrl not", "--term", "(tt, ff)", "--classical"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("(tt, tt)"), std::string::npos) << r.out;
}

TEST(Cli, RunJson) {
  auto r = run({"run", kLib, "--iso", "not", "--term", "tt", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("superposition"), std::string::npos);
}

TEST(Cli, RunFuel) { EXPECT_EQ(run({"run", kLib, "--iso", "maphad", "--term", "[tt, ff]", "--fuel", "3"}).code, 3); }

TEST(Cli, RunIllTypedTerm) { EXPECT_EQ(run({"run", kLib, "--iso", "not", "--term", "()"}).code, 1); }

TEST(Cli, ClassicalRunOfQuantumIsoFails) {
  EXPECT_EQ(run({"run", kLib, "--iso", "had", "--term", "tt", "--classical"}).code, 1);
}

TEST(Cli, Invert) {
  auto r = run({"invert", kLib, "--iso", "phase"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("phase_inv"), std::string::npos);
  EXPECT_NE(r.out.find("-i"), std::string::npos);
}

TEST(Cli, MatrixCsvToFile) {
  auto path = std::filesystem::temp_directory_path() / "isoq_cli_test_gate.csv";
  auto r = run({"matrix", kLib, "--iso", "gate", "--format", "csv", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  auto got = testing::read_matrix_csv(testing::read_text(path.string()));
  auto want = testing::read_matrix_csv(testing::read_text(testing::golden_path("gate.csv")));
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    EXPECT_EQ(got[k].row, want[k].row);
    EXPECT_EQ(got[k].column, want[k].column);
    EXPECT_NEAR(std::abs(got[k].value - want[k].value), 0, 1e-12);
  }
  std::filesystem::remove(path);
}

TEST(Cli, MatrixJsonIsDeterministic) {
  auto a = run({"matrix", kLib, "--iso", "cnotstar", "--bound", "13"});
  auto b = run({"matrix", kLib, "--iso", "cnotstar", "--bound", "13"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, MatrixOverflow) {
  EXPECT_EQ(run({"matrix", testing::fixture_path("length_changing.iso"), "--iso", "consR", "--bound", "4"}).code, 4);
}

TEST(Cli, Roundtrip) {
  EXPECT_EQ(run({"roundtrip", kLib, "--iso", "gate"}).code, 0);
  EXPECT_EQ(run({"roundtrip", kLib, "--iso", "maphad", "--bound", "14"}).code, 0);
  auto noisy = run({"roundtrip", testing::fixture_path("noisy.iso"), "--iso", "noisy", "--unitary-tol", "1e-3"});
  EXPECT_EQ(noisy.code, 1);
}

}  // namespace
}  // namespace isoq
