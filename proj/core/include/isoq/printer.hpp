// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <utility>

#include "isoq/syntax.hpp"

namespace isoq {

/// Input and output type of each clause block, keyed by node address.
using BlockTypes = std::map<const IsoExpr*, std::pair<TypePtr, TypePtr>>;

struct PrintOptions {
  /// When present, clause patterns and bottoms are printed with list and
  /// boolean sugar chosen by type.
  const BlockTypes* block_types = nullptr;
};

std::string pretty_print(const ValueType& t);
std::string pretty_print(const IsoType& t);

/// With a type, lists are resugared greedily and 1 + 1 values print as
/// tt/ff. Without one, only tt/ff are recovered.
std::string pretty_print(const Value& v, const TypePtr& type = nullptr);

std::string pretty_print(const ExtendedValue& e, const TypePtr& type = nullptr);
std::string pretty_print(const IsoExpr& iso, const PrintOptions& options = {});
std::string pretty_print(const Term& t);
std::string pretty_print(const Declaration& d, const PrintOptions& options = {});
std::string pretty_print(const Program& p, const PrintOptions& options = {});

}  // namespace isoq
