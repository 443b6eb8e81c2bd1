// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "isoq/errors.hpp"
#include "isoq/syntax.hpp"

namespace isoq {

/// Parses a whole `.iso` source. Throws ParseError.
Program parse_program(std::string_view source);

/// Parses a term. Iso names are left as variables; see resolve_names.
TermPtr parse_term(std::string_view source);

/// Parses a value type such as `[B] * B`.
TypePtr parse_type(std::string_view source);

/// Parses an iso type such as `(a <-> b) -> [a] <-> [b]`.
IsoTypePtr parse_iso_type(std::string_view source);

/// Replaces free iso variables that name declarations of `program` with
/// Named references.
TermPtr resolve_names(const TermPtr& term, const Program& program);
IsoPtr resolve_names(const IsoPtr& iso, const Program& program);

}  // namespace isoq
