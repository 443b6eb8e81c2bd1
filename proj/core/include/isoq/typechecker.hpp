// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "isoq/errors.hpp"
#include "isoq/printer.hpp"
#include "isoq/syntax.hpp"

namespace isoq {

enum class Mode { Quantum, Classical };

struct CheckOptions {
  Mode mode = Mode::Quantum;
  double unitary_tol = 1e-9;
};

using ValueContext = std::map<std::string, TypePtr>;
using IsoContext = std::map<std::string, IsoTypePtr>;

/// Rows are the distinct right-hand skeletons, columns the clauses.
struct ClauseMatrix {
  std::vector<ValuePtr> rows;
  std::vector<ValuePtr> columns;
  std::vector<std::vector<Amplitude>> entries;  // entries[row][column]

  std::size_t row_count() const { return rows.size(); }
  std::size_t column_count() const { return columns.size(); }
};

bool orthogonal(const Value& a, const Value& b);

/// Number of closed values of a list-free type. Throws InfiniteTypeError.
std::size_t dim(const ValueType& a);

/// Pairwise orthogonal and exhaustive at `a`; type variables are opaque.
/// Throws OverlappingClauses or NonExhaustive (with a witness).
void check_od(const TypePtr& a, const std::vector<ValuePtr>& patterns);

/// Smallest closed value of `a` in canonical order (`_` for opaque atoms).
ValuePtr canonical_min(const ValueType& a);

/// Right-hand sides of one block: OD of bottoms when every clause is a
/// single value, otherwise OD of the distinct skeletons.
void check_ode(const TypePtr& b, const std::vector<ExtPtr>& rhss);

/// True iff every clause has one summand whose amplitude is the literal 1.
bool is_classical_block(const std::vector<Clause>& clauses);

/// Bottom value with variables renamed by first occurrence in the first
/// summand of its clause.
ValuePtr skeleton(const Value& v, const std::map<std::string, std::string>& renaming);

/// Variables of a bottom combination mapped to "#k" by first occurrence.
std::map<std::string, std::string> skeleton_renaming(const ExtendedValue& bottom);

/// Throws ArityMismatch when the skeleton count differs from the clause count.
ClauseMatrix assemble_clause_matrix(const std::vector<Clause>& clauses);

/// max(|M*M - I|, |MM* - I|) entrywise.
double unitarity_deviation(const ClauseMatrix& m);
void check_unitary(const ClauseMatrix& m, double tol = 1e-9);

/// Syntactic part of the structural recursion certificate. Returns the
/// path (0 = left, 1 = right through pairs) of the recursion list.
std::vector<int> check_structural_recursion(const IsoExpr& fix);

/// Full certificate: the syntactic shape plus a list at the chosen path of
/// the declared input type.
void check_structural_recursion(const IsoExpr& fix, const IsoType& declared);

/// Δ;Ψ ⊢ t : a, linear in Δ. `program` resolves Named isos.
void check_value(const ValueContext& delta, const IsoContext& psi, const TermPtr& t,
                 const TypePtr& a, const Program* program = nullptr,
                 const CheckOptions& options = {});

/// Infers the type of a closed term.
TypePtr infer_term(const TermPtr& t, const Program* program = nullptr,
                   const CheckOptions& options = {});

/// Ψ ⊢ ω : T. Unconstrained positions come back as `?n` variables.
IsoTypePtr check_iso(const IsoContext& psi, const IsoPtr& iso, const Program* program = nullptr,
                     const CheckOptions& options = {});

struct DeclarationInfo {
  IsoTypePtr type;
  bool classical = true;
  BlockTypes block_types;
};

struct CheckResult {
  std::vector<TypeError> errors;
  std::map<std::string, DeclarationInfo> decls;

  bool ok() const { return errors.empty(); }
  BlockTypes block_types() const;
};

/// Checks declarations in order. Stops at the first error unless
/// `all_errors`, in which case each declaration reports at most one.
CheckResult check_program(const Program& program, const CheckOptions& options = {},
                          bool all_errors = false);

/// Throws the first error of check_program.
CheckResult check_program_or_throw(const Program& program, const CheckOptions& options = {});

}  // namespace isoq
