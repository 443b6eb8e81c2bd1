// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "isoq/syntax.hpp"

namespace isoq {

/// (a <-> b)^-1 = b <-> a, pushed through arrows.
IsoTypePtr invert_type(const IsoTypePtr& t);

/// "n" <-> "n_inv"; applying it twice gives the original name.
std::string inverse_name(const std::string& name);

/// Syntactic inverse. Named references point at inverse_name(decl), so the
/// result is meaningful inside a program that also holds the inverted
/// dependencies (see with_inverses).
///
/// Classical blocks swap sides and reverse their let chains. Quantum blocks
/// without lets are conjugate-transposed. Quantum blocks with lets are
/// split into a classical part S (lets down to one skeleton per clause)
/// followed by a let-free rotation R, and inverted as S^-1 after R^-1.
IsoPtr invert_iso(const IsoPtr& iso);

/// Inverted declarations for `names` and everything they reference, in
/// dependency order.
std::vector<Declaration> invert_declarations(const Program& program, const std::vector<std::string>& names);

/// `program` plus the inverse of every declaration not already present.
Program with_inverses(const Program& program);

}  // namespace isoq
