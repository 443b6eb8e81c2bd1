// SPDX-License-Identifier: Apache-2.0
#include "isoq_cli/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "isoq/denotation.hpp"
#include "isoq/evaluator.hpp"
#include "isoq/inverter.hpp"
#include "isoq/parser.hpp"
#include "isoq/printer.hpp"
#include "isoq/typechecker.hpp"

namespace isoq::cli {

namespace {

using nlohmann::ordered_json;

constexpr std::size_t kDefaultFuel = 1000000;

// A failed command: exit code plus what was already reported.
struct Exit {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string format_complex(std::complex<double> a) {
  if (a.imag() == 0.0) return format_double(a.real());
  if (a.real() == 0.0) return format_double(a.imag()) + "i";
  std::string im = format_double(a.imag());
  return format_double(a.real()) + (a.imag() < 0 ? "" : "+") + im + "i";
}

std::string describe(const TypeError& e, const std::string& file) {
  std::string loc = file + ":" + std::to_string(e.span().line) + ":" + std::to_string(e.span().column) + ": ";
  std::string where = e.declaration().empty() ? "" : " (in " + e.declaration() + ")";
  return loc + e.what() + where;
}

ordered_json error_json(const TypeError& e) {
  ordered_json j;
  j["code"] = std::string(error_code_name(e.code()));
  j["message"] = e.message();
  j["declaration"] = e.declaration();
  j["line"] = e.span().line;
  j["column"] = e.span().column;
  if (e.witness) j["witness"] = pretty_print(*e.witness, e.witness_type);
  return j;
}

std::size_t fuel_from(std::optional<std::size_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ISOQ_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultFuel;
}

struct Loaded {
  Program program;
  CheckResult result;
};

// Parses and checks `file`; reports and throws Exit on failure.
Loaded load(const std::string& file, const CheckOptions& options, std::ostream& err) {
  Loaded l;
  try {
    l.program = parse_program(read_file(file));
  } catch (const ParseError& e) {
    err << file << ":" << e.what() << "\n";
    throw Exit{kParse};
  }
  l.result = check_program(l.program, options, false);
  if (!l.result.ok()) {
    err << describe(l.result.errors.front(), file) << "\n";
    throw Exit{kFailure};
  }
  return l;
}

// A declaration name, or any iso expression such as "map not".
IsoPtr resolve_iso(const std::string& text, const Program& program) {
  if (program.find(text)) return IsoExpr::named(text);
  auto t = parse_term(text + " ()");
  if (t->kind != Term::Kind::IsoApp) throw std::invalid_argument("not an iso: " + text);
  return resolve_names(t->iso, program);
}

IsoTypePtr base_type_of(const IsoPtr& iso, const Program& program) {
  auto t = check_iso({}, iso, &program);
  if (t->kind != IsoType::Kind::Base) {
    throw std::invalid_argument("iso has higher-order type " + pretty_print(*t));
  }
  return t;
}

// ---- check

struct CheckArgs {
  std::string file;
  bool json = false;
  bool all_errors = false;
  std::string mode = "quantum";
  double unitary_tol = 1e-9;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  CheckOptions options;
  options.mode = a.mode == "classical" ? Mode::Classical : Mode::Quantum;
  options.unitary_tol = a.unitary_tol;
  Program program;
  try {
    program = parse_program(read_file(a.file));
  } catch (const ParseError& e) {
    if (a.json) {
      ordered_json j;
      j["schema"] = "isoq/1";
      j["ok"] = false;
      j["parse_error"] = {{"line", e.line()}, {"column", e.column()}, {"message", e.what()}};
      out << j.dump(2) << "\n";
    }
    err << a.file << ":" << e.what() << "\n";
    return kParse;
  }
  auto result = check_program(program, options, a.all_errors);
  if (a.json) {
    ordered_json j;
    j["schema"] = "isoq/1";
    j["ok"] = result.ok();
    j["declarations"] = ordered_json::array();
    for (const auto& d : program.decls) {
      auto it = result.decls.find(d.name);
      if (it == result.decls.end()) continue;
      j["declarations"].push_back(
          {{"name", d.name}, {"type", pretty_print(*d.type)}, {"classical", it->second.classical}});
    }
    j["errors"] = ordered_json::array();
    for (const auto& e : result.errors) j["errors"].push_back(error_json(e));
    out << j.dump(2) << "\n";
  } else if (result.ok()) {
    out << "ok: " << program.decls.size() << " declarations\n";
  }
  for (const auto& e : result.errors) err << describe(e, a.file) << "\n";
  return result.ok() ? kOk : kFailure;
}

// ---- run

struct RunArgs {
  std::string file;
  std::string iso;
  std::string term;
  std::optional<std::size_t> fuel;
  bool classical = false;
  std::string format = "text";
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  auto l = load(a.file, {}, err);
  IsoPtr iso;
  TermPtr input;
  try {
    iso = resolve_iso(a.iso, l.program);
    input = resolve_names(parse_term(a.term), l.program);
  } catch (const ParseError& e) {
    err << "<argument>:" << e.what() << "\n";
    return kParse;
  }
  auto applied = Term::apply(iso, input);
  TypePtr type;
  try {
    type = infer_term(applied, &l.program);
  } catch (const TypeError& e) {
    err << e.what() << "\n";
    return kFailure;
  }
  EvalOptions options;
  options.fuel = fuel_from(a.fuel);
  auto s = normalize(applied, l.program, options);
  if (a.classical) {
    if (s.size() != 1 || std::abs(s.entries.begin()->second - 1.0) > 1e-9) {
      err << "result is not classical: " << s.size() << " values in superposition\n";
      return kFailure;
    }
    const auto& v = s.entries.begin()->first;
    if (a.format == "json") {
      ordered_json j;
      j["schema"] = "isoq/1";
      j["type"] = pretty_print(*type);
      j["value"] = pretty_print(*v, type);
      out << j.dump(2) << "\n";
    } else {
      out << pretty_print(*v, type) << "\n";
    }
    return kOk;
  }
  if (a.format == "json") {
    ordered_json j;
    j["schema"] = "isoq/1";
    j["type"] = pretty_print(*type);
    j["superposition"] = ordered_json::array();
    for (const auto& [v, amp] : s.entries) {
      j["superposition"].push_back({{"value", pretty_print(*v, type)}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << "{";
    bool first = true;
    for (const auto& [v, amp] : s.entries) {
      out << (first ? "" : ", ") << pretty_print(*v, type) << ": " << format_complex(amp);
      first = false;
    }
    out << "}\n";
  }
  return kOk;
}

// ---- invert

struct InvertArgs {
  std::string file;
  std::string iso;
};

int cmd_invert(const InvertArgs& a, std::ostream& out, std::ostream& err) {
  auto l = load(a.file, {}, err);
  if (!l.program.find(a.iso)) {
    err << "no declaration named " << a.iso << "\n";
    return kFailure;
  }
  Program inverted;
  inverted.decls = invert_declarations(l.program, {a.iso});
  auto result = check_program(inverted);
  if (!result.ok()) {
    err << describe(result.errors.front(), "<inverse>") << "\n";
    return kFailure;
  }
  auto blocks = result.block_types();
  PrintOptions options;
  options.block_types = &blocks;
  out << pretty_print(inverted, options);
  return kOk;
}

// ---- matrix

struct MatrixArgs {
  std::string file;
  std::string iso;
  std::size_t bound = 11;
  std::string format = "json";
  double tol = 1e-9;
  std::string out_path;
  std::optional<std::size_t> fuel;
};

void print_report(std::ostream& os, const DenotationMatrix& m, const IsometryReport& r,
                  const std::optional<BlockReport>& blocks) {
  os << "basis: " << m.in.size() << " inputs, " << m.out.size() << " outputs\n";
  os << "isometry deviation: " << format_double(r.isometry) << "\n";
  if (r.coisometry) os << "coisometry deviation: " << format_double(*r.coisometry) << "\n";
  if (blocks) {
    os << "off-block mass: " << format_double(blocks->off_block) << "\n";
    for (const auto& b : blocks->blocks) {
      os << "block " << b.length << ": " << b.dim_out << "x" << b.dim_in
         << " isometry " << format_double(b.isometry);
      if (b.coisometry) os << " coisometry " << format_double(*b.coisometry);
      os << (b.surjective ? " surjective" : "") << "\n";
    }
  }
  if (!m.overflow.empty()) {
    os << "overflow: " << m.overflow.size() << " entries leave the output basis\n";
    for (const auto& o : m.overflow) {
      os << "  " << pretty_print(*o.input, m.in.type) << " -> " << pretty_print(*o.output, m.out.type) << " ("
         << format_complex(o.amplitude) << ")\n";
    }
  }
}

int cmd_matrix(const MatrixArgs& a, std::ostream& out, std::ostream& err) {
  auto l = load(a.file, {}, err);
  auto iso = resolve_iso(a.iso, l.program);
  auto type = base_type_of(iso, l.program);
  EvalOptions options;
  options.fuel = fuel_from(a.fuel);
  auto m = denote(iso, type->from, type->to, a.bound, l.program, options);
  auto report = check_isometry(m);
  std::optional<BlockReport> blocks;
  try {
    blocks = block_decompose(m, a.tol);
  } catch (const ShapeError&) {
  }
  std::string exported = a.format == "csv" ? matrix_to_csv(m) : matrix_to_json(m, report, blocks);
  if (a.out_path.empty()) {
    out << exported;
    print_report(err, m, report, blocks);
  } else {
    std::ofstream f(a.out_path, std::ios::binary);
    if (!f) {
      err << "cannot write " << a.out_path << "\n";
      return kFailure;
    }
    f << exported;
    print_report(out, m, report, blocks);
  }
  if (!m.overflow.empty()) return kOverflow;
  return report.ok(a.tol) ? kOk : kFailure;
}

// ---- roundtrip

struct RoundtripArgs {
  std::string file;
  std::string iso;
  std::size_t bound = 11;
  double tol = 1e-9;
  double unitary_tol = 1e-9;
  std::optional<std::size_t> fuel;
};

// Distance of `s` from the basis vector v.
double distance_to(const Superposition& s, const ValuePtr& v) {
  double d = 0.0;
  bool seen = false;
  for (const auto& [w, amp] : s.entries) {
    if (value_equal(*w, *v)) {
      d += std::norm(amp - 1.0);
      seen = true;
    } else {
      d += std::norm(amp);
    }
  }
  if (!seen) d += 1.0;
  return std::sqrt(d);
}

bool exactly(const Superposition& s, const ValuePtr& v) {
  return s.size() == 1 && value_equal(*s.entries.begin()->first, *v) && s.entries.begin()->second == 1.0;
}

int cmd_roundtrip(const RoundtripArgs& a, std::ostream& out, std::ostream& err) {
  CheckOptions check;
  check.unitary_tol = a.unitary_tol;
  auto l = load(a.file, check, err);
  auto program = with_inverses(l.program);
  auto iso = resolve_iso(a.iso, l.program);
  auto inverse = invert_iso(iso);
  auto type = base_type_of(iso, l.program);
  EvalOptions options;
  options.fuel = fuel_from(a.fuel);

  auto in = enumerate_values(type->from, a.bound);
  auto outs = enumerate_values(type->to, a.bound);
  bool classical = true;
  std::vector<std::pair<ValuePtr, Superposition>> forward;
  for (const auto& v : in.values) {
    auto s = apply(iso, v, program, options);
    classical = classical && s.size() == 1 && s.entries.begin()->second == 1.0;
    forward.emplace_back(v, std::move(s));
  }
  std::size_t failures = 0;
  auto check_one = [&](const ValuePtr& v, const Superposition& back, const TypePtr& t) {
    bool ok = classical ? exactly(back, v) : distance_to(back, v) <= a.tol;
    if (ok) return;
    ++failures;
    err << "counterexample: " << pretty_print(*v, t) << " comes back as {";
    bool first = true;
    for (const auto& [w, amp] : back.entries) {
      err << (first ? "" : ", ") << pretty_print(*w, t) << ": " << format_complex(amp);
      first = false;
    }
    err << "} (distance " << format_double(distance_to(back, v)) << ")\n";
  };
  for (const auto& [v, s] : forward) check_one(v, apply(inverse, s, program, options), type->from);
  for (const auto& w : outs.values) {
    auto back = apply(iso, apply(inverse, w, program, options), program, options);
    check_one(w, back, type->to);
  }
  if (failures > 0) {
    err << failures << " round trips failed\n";
    return kFailure;
  }
  out << "ok: " << in.size() << " inputs and " << outs.size() << " outputs round-trip"
      << (classical ? " exactly" : " within " + format_double(a.tol)) << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Typechecker, interpreter and matrix extractor for reversible iso programs", "isoq"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Type-check every declaration");
  c->add_option("file", check.file, "Source file")->required();
  c->add_flag("--json", check.json, "Machine-readable diagnostics");
  c->add_flag("--all-errors", check.all_errors, "Report one error per failing declaration");
  c->add_option("--mode", check.mode, "quantum or classical")->check(CLI::IsMember({"quantum", "classical"}));
  c->add_option("--unitary-tol", check.unitary_tol, "Tolerance for clause-matrix unitarity");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Apply an iso to a term and normalize");
  r->add_option("file", run.file, "Source file")->required();
  r->add_option("--iso", run.iso, "Declaration or iso expression")->required();
  r->add_option("--term", run.term, "Argument term")->required();
  r->add_option("--fuel", run.fuel, "Step limit per component");
  r->add_flag("--classical", run.classical, "Print the single resulting value");
  r->add_option("--format", run.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  InvertArgs invert;
  auto* i = app.add_subcommand("invert", "Print the inverse of a declaration and its dependencies");
  i->add_option("file", invert.file, "Source file")->required();
  i->add_option("--iso", invert.iso, "Declaration name")->required();

  MatrixArgs matrix;
  auto* m = app.add_subcommand("matrix", "Truncated matrix of an iso with an isometry report");
  m->add_option("file", matrix.file, "Source file")->required();
  m->add_option("--iso", matrix.iso, "Declaration or iso expression")->required();
  m->add_option("--bound", matrix.bound, "Largest value size, in constructors");
  m->add_option("--format", matrix.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  m->add_option("--tol", matrix.tol, "Deviation tolerance");
  m->add_option("--out", matrix.out_path, "Write the export here instead of stdout");
  m->add_option("--fuel", matrix.fuel, "Step limit per component");

  RoundtripArgs roundtrip;
  auto* t = app.add_subcommand("roundtrip", "Check that the inverse undoes the iso on every small value");
  t->add_option("file", roundtrip.file, "Source file")->required();
  t->add_option("--iso", roundtrip.iso, "Declaration or iso expression")->required();
  t->add_option("--bound", roundtrip.bound, "Largest value size, in constructors");
  t->add_option("--tol", roundtrip.tol, "Distance tolerance for quantum isos");
  t->add_option("--unitary-tol", roundtrip.unitary_tol, "Tolerance for clause-matrix unitarity");
  t->add_option("--fuel", roundtrip.fuel, "Step limit per component");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (c->parsed()) return cmd_check(check, out, err);
    if (r->parsed()) return cmd_run(run, out, err);
    if (i->parsed()) return cmd_invert(invert, out, err);
    if (m->parsed()) return cmd_matrix(matrix, out, err);
    if (t->parsed()) return cmd_roundtrip(roundtrip, out, err);
  } catch (const Exit& e) {
    return e.code;
  } catch (const ParseError& e) {
    err << "<argument>:" << e.what() << "\n";
    return kParse;
  } catch (const TypeError& e) {
    err << e.what() << "\n";
    return kFailure;
  } catch (const EvalError& e) {
    err << e.what() << "\n";
    return e.kind() == EvalError::Kind::FuelExhausted ? kFuel : kFailure;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace isoq::cli
