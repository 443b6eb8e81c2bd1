// SPDX-License-Identifier: Apache-2.0
// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Optional argv[1]: path of the isoq executable, used for the
// cross-process determinism check.
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "isoq/denotation.hpp"
#include "isoq/evaluator.hpp"
#include "isoq/inverter.hpp"
#include "isoq/parser.hpp"
#include "isoq/printer.hpp"
#include "isoq/typechecker.hpp"
#include "isoq_cli/cli.hpp"
#include "isoq_test_support.hpp"

namespace {

using namespace isoq;
namespace t = isoq::testing;
using Clock = std::chrono::steady_clock;

const std::string kLib = ISOQ_STDLIB_PATH;
std::string g_binary;

// Collects failure reasons for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool cond, const std::string& what) {
    if (!cond) failures.push_back(what);
  }
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const Program& lib() { return t::stdlib(); }

const Program& full() {
  static const Program p = with_inverses(lib());
  return p;
}

ValuePtr val(const std::string& s) { return *term_as_value(parse_term(s)); }

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// ---- 1

void stdlib_checks(Check& c) {
  auto r = cli({"check", kLib});
  c.expect(r.code == 0, "check exit " + std::to_string(r.code) + ": " + r.err);
  for (const char* name : {"not", "cnot", "if", "ctrl", "toffoli", "cnotstar", "map", "mapAccu", "had", "gate"}) {
    c.expect(lib().find(name) != nullptr, std::string("missing ") + name);
  }
  auto result = check_program(lib());
  c.expect(result.ok(), "check_program failed");
  if (!result.ok()) return;
  c.expect(iso_type_equal(*result.decls.at("ctrl").type, *parse_iso_type("(a <-> a) -> B * a <-> B * a")),
           "ctrl type");
  c.expect(iso_type_equal(*result.decls.at("toffoli").type, *parse_iso_type("B * B * B <-> B * B * B")),
           "toffoli type");
}

// ---- 2

void negative_suite(Check& c) {
  struct Case {
    const char* file;
    const char* code;
  };
  for (auto [file, code] : {Case{"overlap.iso", "OverlappingClauses"}, Case{"nonexhaustive.iso", "NonExhaustive"},
                            Case{"nonlinear.iso", "NonLinearVar"}, Case{"nonunitary.iso", "NonUnitary"},
                            Case{"nonstructural.iso", "NotStructurallyRecursive"}}) {
    auto r = cli({"check", t::fixture_path(file), "--json"});
    c.expect(r.code == cli::kFailure, std::string(file) + " exit " + std::to_string(r.code));
    auto program = t::fixture(file);
    auto result = check_program(program);
    if (result.ok()) {
      c.expect(false, std::string(file) + " checked OK");
      continue;
    }
    const auto& e = result.errors.front();
    c.expect(error_code_name(e.code()) == code, std::string(file) + " gave " + std::string(error_code_name(e.code())));
    if (e.code() == ErrorCode::NonExhaustive) {
      c.expect(e.witness && value_equal(*e.witness, *val("(tt::[], tt)")), "witness is not (tt::[], tt)");
      c.expect(r.out.find("\"witness\": \"([tt], tt)\"") != std::string::npos, "json witness missing");
    }
    if (e.code() == ErrorCode::NonUnitary) {
      auto m = assemble_clause_matrix(program.decls.back().body->clauses);
      bool collapse = m.row_count() == 2 && m.column_count() == 2;
      if (collapse) {
        std::array<double, 4> want = {1, 0, 1, 0};  // row-major [[1,0],[1,0]]
        for (std::size_t i = 0; i < 4; ++i) {
          collapse = collapse && std::abs(m.entries[i / 2][i % 2].eval() - want[i]) < 1e-12;
        }
      }
      c.expect(collapse, "nonunitary fixture is not [[1,0],[1,0]]");
    }
  }
  auto r = cli({"check", t::fixture_path("syntax_error.iso")});
  c.expect(r.code == cli::kParse, "syntax_error.iso exit " + std::to_string(r.code));
  bool threw = false;
  try {
    t::fixture("syntax_error.iso");
  } catch (const ParseError&) {
    threw = true;
  }
  c.expect(threw, "no ParseError");
}

// ---- 3

void small_denotations(Check& c) {
  const double s = 1 / std::sqrt(2.0);
  auto had = denote(IsoExpr::named("had"), 3, lib());
  std::array<std::array<double, 2>, 2> h = {{{s, s}, {s, -s}}};
  c.expect(had.in.size() == 2 && had.out.size() == 2, "had basis size");
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      c.expect(std::abs(had.at(i, j) - h[i][j]) <= 1e-9, "had entry " + std::to_string(i) + std::to_string(j));
    }
  }
  auto gate = denote(IsoExpr::named("gate"), 11, lib());
  auto golden = t::read_matrix_csv(t::read_text(t::golden_path("gate.csv")));
  auto type = parse_type("B * B");
  c.expect(gate.in.size() == 4 && gate.out.size() == 4, "gate basis size");
  std::map<std::pair<std::string, std::string>, std::complex<double>> want;
  for (const auto& e : golden) want[{e.row, e.column}] = e.value;
  for (std::size_t i = 0; i < gate.out.size(); ++i) {
    for (std::size_t j = 0; j < gate.in.size(); ++j) {
      std::pair<std::string, std::string> key{pretty_print(*gate.out.values[i], type),
                                              pretty_print(*gate.in.values[j], type)};
      auto expected = want.count(key) ? want[key] : std::complex<double>{};
      c.expect(std::abs(gate.at(i, j) - expected) <= 1e-9, "gate entry " + key.first + " / " + key.second);
    }
  }
}

// ---- 4

// Closed instantiation of every classical declaration.
struct Instance {
  std::string name;
  IsoPtr iso;
  TypePtr from;
  TypePtr to;
};

std::vector<Instance> classical_instances() {
  auto result = check_program(lib());
  std::vector<Instance> out;
  for (const auto& d : lib().decls) {
    const auto& info = result.decls.at(d.name);
    if (!info.classical || info.type->kind != IsoType::Kind::Base) continue;
    auto from = info.type->from;
    auto to = info.type->to;
    // Polymorphic atoms are instantiated at a list type.
    std::function<TypePtr(const TypePtr&)> close = [&](const TypePtr& ty) -> TypePtr {
      switch (ty->kind) {
        case ValueType::Kind::Var: return parse_type("[B]");
        case ValueType::Kind::Sum: return ValueType::sum(close(ty->left), close(ty->right));
        case ValueType::Kind::Product: return ValueType::product(close(ty->left), close(ty->right));
        case ValueType::Kind::List: return ValueType::list(close(ty->left));
        default: return ty;
      }
    };
    out.push_back({d.name, IsoExpr::named(d.name), close(from), close(to)});
  }
  // The higher-order combinators, applied to classical arguments.
  for (auto [fn, arg] : {std::pair{"if", "not"}, std::pair{"map", "cnot"}, std::pair{"mapAccu", "cnot"}}) {
    IsoPtr iso = IsoExpr::app(IsoExpr::named(fn), IsoExpr::named(arg));
    if (std::string(fn) == "if") iso = IsoExpr::app(iso, IsoExpr::named("id"));
    auto type = check_iso({}, iso, &lib());
    out.push_back({std::string(fn) + " " + arg, iso, type->from, type->to});
  }
  return out;
}

IsoPtr inverse_of(const Instance& inst) {
  if (inst.iso->kind == IsoExpr::Kind::Named) return IsoExpr::named(inverse_name(inst.iso->name));
  return invert_iso(inst.iso);
}

void round_trip(Check& c, std::size_t bound) {
  for (const auto& inst : classical_instances()) {
    auto inv = inverse_of(inst);
    auto inputs = enumerate_values(inst.from, bound);
    c.expect(inputs.size() > 0, inst.name + " has no inputs at bound " + std::to_string(bound));
    for (const auto& v : inputs.values) {
      auto w = run_classical(inst.iso, v, full());
      auto back = run_classical(inv, w, full());
      c.expect(value_equal(*back, *v), inst.name + " forward " + pretty_print(*v, inst.from));
    }
    for (const auto& w : enumerate_values(inst.to, bound).values) {
      auto v = run_classical(inv, w, full());
      auto back = run_classical(inst.iso, v, full());
      c.expect(value_equal(*back, *w), inst.name + " backward " + pretty_print(*w, inst.to));
    }
  }
}

// ---- 5

void inversion_typing(Check& c) {
  auto original = check_program(lib());
  for (const auto& d : lib().decls) {
    auto r = cli({"invert", kLib, "--iso", d.name});
    c.expect(r.code == 0, "invert " + d.name + " exit " + std::to_string(r.code));
    if (r.code != 0) continue;
    try {
      auto inverted = parse_program(r.out);
      auto result = check_program(inverted);
      c.expect(result.ok(), "inverse of " + d.name + " fails to check");
      if (!result.ok()) continue;
      auto want = invert_type(original.decls.at(d.name).type);
      c.expect(iso_type_equal(*result.decls.at(inverse_name(d.name)).type, *want), d.name + " inverted type");
    } catch (const ParseError& e) {
      c.expect(false, "inverse of " + d.name + " does not parse: " + e.what());
    }
  }
}

// ---- 6

void recursive_unitarity(Check& c) {
  auto m = denote(IsoExpr::named("maphad"), 18, lib());
  auto report = block_decompose(m, 1e-9);
  c.expect(report.off_block <= 1e-9, "off-block mass " + hex(report.off_block));
  c.expect(report.blocks.size() == 5, "block count " + std::to_string(report.blocks.size()));
  for (const auto& b : report.blocks) {
    std::size_t want = std::size_t{1} << b.length;
    c.expect(b.dim_in == want && b.dim_out == want, "block dims at length " + std::to_string(b.length));
    c.expect(b.isometry <= 1e-9, "U*U - I at length " + std::to_string(b.length));
    c.expect(b.coisometry && *b.coisometry <= 1e-9, "UU* - I at length " + std::to_string(b.length));
    auto dense = dense_block(m, report.path, b.length);
    auto oracle = t::hadamard_power(b.length);
    double dev = 0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      for (std::size_t j = 0; j < oracle.size(); ++j) dev = std::max(dev, std::abs(dense[i][j] - oracle[i][j]));
    }
    c.expect(dev <= 1e-9, "Kronecker oracle deviation " + hex(dev) + " at length " + std::to_string(b.length));
  }
}

// ---- 7

void adjoint(Check& c) {
  for (auto [name, bound] : {std::pair{"had", 3}, std::pair{"gate", 11}, std::pair{"maphad", 18},
                             std::pair{"cnotstar", 21}}) {
    auto m = denote(IsoExpr::named(name), bound, full());
    auto inv = denote(IsoExpr::named(inverse_name(name)), bound, full());
    c.expect(m.overflow.empty() && inv.overflow.empty(), std::string(name) + " overflows");
    double dev = adjoint_deviation(m, inv);
    c.expect(dev <= 1e-9, std::string(name) + " adjoint deviation " + hex(dev));
  }
}

// ---- 8

Superposition random_state(const Basis& basis, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Superposition s;
  s.type = basis.type;
  double norm = 0;
  for (const auto& v : basis.values) {
    std::complex<double> a(gauss(rng), gauss(rng));
    s.entries[v] = a;
    norm += std::norm(a);
  }
  for (auto& [v, a] : s.entries) a /= std::sqrt(norm);
  return s;
}

// Amplitude with the exact value round(x * 2^20) / 2^20 in both parts.
Amplitude dyadic(std::complex<double> x) {
  const std::int64_t scale = 1 << 20;
  auto re = Amplitude::rational(std::llround(x.real() * scale), scale);
  auto im = Amplitude::rational(std::llround(x.imag() * scale), scale);
  return re + Amplitude::imag() * im;
}

TermPtr superposition_term(const Superposition& s) {
  TermPtr out;
  for (const auto& [v, a] : s.entries) {
    auto summand = Term::scale(dyadic(a), value_to_term(v));
    out = out ? Term::sum(out, summand) : summand;
  }
  return out;
}

void norm_and_linearity(Check& c) {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  struct Target {
    const char* name;
    std::size_t bound;
  };
  for (auto [name, bound] : {Target{"had", 3}, Target{"phase", 3}, Target{"gate", 11}, Target{"maphad", 14}}) {
    auto iso = IsoExpr::named(name);
    auto type = check_iso({}, iso, &lib());
    auto basis = enumerate_values(type->from, bound);
    double worst_norm = 0, worst_linear = 0;
    for (int k = 0; k < 200; ++k) {
      auto in = random_state(basis, rng);
      auto out = apply(iso, in, lib());
      worst_norm = std::max(worst_norm, std::abs(out.norm() - 1.0));

      // Linearity through the term language: iso (a*u + b*v) against
      // a*(iso u) + b*(iso v), with a, b exactly representable.
      auto u = random_state(basis, rng);
      auto v = random_state(basis, rng);
      double theta = angle(rng);
      auto alpha = dyadic(std::polar(std::cos(theta), angle(rng)));
      auto beta = dyadic(std::polar(std::sin(theta), angle(rng)));
      auto combined = Term::sum(Term::scale(alpha, superposition_term(u)), Term::scale(beta, superposition_term(v)));
      auto lhs = normalize(Term::apply(iso, combined), lib());
      auto fu = normalize(Term::apply(iso, superposition_term(u)), lib());
      auto fv = normalize(Term::apply(iso, superposition_term(v)), lib());
      std::map<ValuePtr, std::complex<double>, CanonicalLess> rhs;
      for (const auto& [w, a] : fu.entries) rhs[w] += alpha.eval() * a;
      for (const auto& [w, a] : fv.entries) rhs[w] += beta.eval() * a;
      for (const auto& [w, a] : lhs.entries) rhs[w] -= a;
      for (const auto& [w, a] : rhs) worst_linear = std::max(worst_linear, std::abs(a));
    }
    c.expect(worst_norm <= 1e-9, std::string(name) + " norm drift " + hex(worst_norm));
    c.expect(worst_linear <= 1e-9, std::string(name) + " linearity defect " + hex(worst_linear));
  }
}

// ---- 9

void cnotstar_behaviour(Check& c) {
  std::size_t cases = 0;
  for (std::size_t len = 0; len <= 4; ++len) {
    for (std::size_t m = 0; m < (std::size_t{1} << len); ++m) {
      std::vector<bool> controls(len);
      for (std::size_t k = 0; k < len; ++k) controls[k] = (m >> k) & 1u;
      for (bool target : {false, true}) {
        ++cases;
        auto in = "(" + t::bool_list(controls) + ", " + (target ? "tt" : "ff") + ")";
        auto want = "(" + t::bool_list(controls) + ", " + (t::cnotstar_oracle(controls, target) ? "tt" : "ff") + ")";
        auto got = run_classical(IsoExpr::named("cnotstar"), val(in), lib());
        c.expect(value_equal(*got, *val(want)), "cnotstar " + in);
      }
    }
  }
  c.expect(cases == 62, "case count " + std::to_string(cases));
}

// ---- 10

std::string run_binary(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

void determinism(Check& c) {
  const std::vector<std::vector<std::string>> commands = {
      {"run", kLib, "--iso", "maphad", "--term", "[tt, ff, tt]", "--format", "json"},
      {"run", kLib, "--iso", "gate", "--term", "(tt, ff)", "--format", "json"},
      {"matrix", kLib, "--iso", "gate", "--format", "json"},
      {"matrix", kLib, "--iso", "cnotstar", "--bound", "17", "--format", "json"},
  };
  for (const auto& args : commands) {
    auto first = cli(args);
    c.expect(first.code == 0 && !first.out.empty(), args[0] + " " + args[3] + " failed");
    for (int k = 0; k < 3; ++k) c.expect(cli(args).out == first.out, args[0] + " " + args[3] + " differs in-process");
    if (!g_binary.empty()) {
      std::string command = "'" + g_binary + "'";
      for (const auto& a : args) command += " '" + a + "'";
      command += " 2>/dev/null";
      for (int k = 0; k < 2; ++k) {
        c.expect(run_binary(command) == first.out, args[0] + " " + args[3] + " differs across processes");
      }
    }
  }
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;  // 0 = untimed
  std::function<void(Check&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_binary = argv[1];
  const std::vector<Criterion> criteria = {
      {1, "stdlib type-checks", 1, stdlib_checks},
      {2, "negative suite", 0, negative_suite},
      {3, "had and gate denotations", 1, small_denotations},
      {4, "classical round trips (bounds 11 and 21)", 10,
       [](Check& c) {
         round_trip(c, 11);
         round_trip(c, 21);
       }},
      {5, "inverses re-check at the inverted type", 0, inversion_typing},
      {6, "map had block-unitary, lengths 0-4", 30, recursive_unitarity},
      {7, "inverse denotes the adjoint", 0, adjoint},
      {8, "norm preservation and linearity", 30, norm_and_linearity},
      {9, "cnotstar truth table", 0, cnotstar_behaviour},
      {10, "deterministic JSON", 0, determinism},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    auto start = Clock::now();
    try {
      criterion.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (criterion.limit_seconds > 0 && seconds > criterion.limit_seconds) {
      check.failures.push_back("took " + hex(seconds) + " s, limit " + hex(criterion.limit_seconds) + " s");
    }
    bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("%s %2d %s (%.3f s)\n", ok ? "PASS" : "FAIL", criterion.id, criterion.title, seconds);
    for (std::size_t k = 0; k < check.failures.size() && k < 10; ++k) {
      std::printf("       %s\n", check.failures[k].c_str());
    }
    if (check.failures.size() > 10) std::printf("       ... %zu more\n", check.failures.size() - 10);
  }
  return failed == 0 ? 0 : 1;
}
