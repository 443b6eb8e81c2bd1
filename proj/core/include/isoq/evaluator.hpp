// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "isoq/errors.hpp"
#include "isoq/syntax.hpp"

namespace isoq {

using Valuation = std::map<std::string, ValuePtr>;

/// Closed values with complex amplitudes, in canonical order. No entry
/// has modulus below the pruning threshold.
struct Superposition {
  TypePtr type;  // may be null
  std::map<ValuePtr, std::complex<double>, CanonicalLess> entries;

  double norm() const;  // l2
  std::complex<double> amplitude(const ValuePtr& v) const;
  std::size_t size() const { return entries.size(); }
};

/// Number of times each reduction rule fired.
struct EvalStats {
  std::size_t let_e = 0;
  std::size_t iso_app = 0;
  std::size_t h_iso_app = 0;
  std::size_t iso_rec = 0;
  std::size_t unfold = 0;
  std::size_t steps = 0;
};

struct EvalOptions {
  std::size_t fuel = 1000000;  // pure steps per component
  double prune = 1e-12;
  /// Called with every pure component before it is stepped.
  std::function<void(const TermPtr&)> observer;
};

/// sigma[pattern] = w, or nullopt when the constructors clash.
std::optional<Valuation> match_value(const Value& pattern, const ValuePtr& w);

/// Replaces free value variables. Throws EvalError(UnboundVariable) when a
/// free variable is missing from sigma.
TermPtr substitute(const Valuation& sigma, const TermPtr& t);
TermPtr substitute(const Valuation& sigma, const ExtendedValue& e);

/// Capture-avoiding iso substitution body[replacement/name].
IsoPtr substitute_iso(const IsoPtr& body, const std::string& name, const IsoPtr& replacement);

/// True for terms built from (), inl, inr and pairs only.
bool is_closed_value(const Term& t);

/// One leftmost-innermost step of a pure term; nullopt on values.
/// Throws EvalError(StuckTerm).
std::optional<TermPtr> step_pure(const TermPtr& t, const Program& program, EvalStats* stats = nullptr);

/// Splits a term into scaled pure components by distributing sums and
/// scalars through constructors, let-bound terms and iso arguments.
std::vector<std::pair<std::complex<double>, TermPtr>> flatten(const TermPtr& t);

/// Normal form of a closed term. Throws EvalError(FuelExhausted).
Superposition normalize(const TermPtr& t, const Program& program, const EvalOptions& options = {},
                        EvalStats* stats = nullptr);

Superposition apply(const IsoPtr& iso, const ValuePtr& v, const Program& program,
                    const EvalOptions& options = {}, EvalStats* stats = nullptr);

/// Linear extension over the entries of `input`.
Superposition apply(const IsoPtr& iso, const Superposition& input, const Program& program,
                    const EvalOptions& options = {});

/// The single value reached from `iso v`. Throws EvalError(NotClassical).
ValuePtr run_classical(const IsoPtr& iso, const ValuePtr& v, const Program& program,
                       const EvalOptions& options = {});

}  // namespace isoq
