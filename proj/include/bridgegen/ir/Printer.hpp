#pragma once

#include "bridgegen/ir/IR.hpp"

#include <string>

namespace bridgegen::ir {

/// Deterministic textual form of a module.
///
/// Values are numbered per top-level symbol in definition order: function
/// entry arguments are %arg0.., constants %cst, %cst_0.., everything else
/// %0, %1... Nested region entry arguments continue the %argN sequence.
/// Blocks are labelled ^bbN by position in their region and carry a
/// predecessor comment. A function's entry label is printed only when the
/// body has more than one block. Known ops use their pretty syntax; anything
/// else is printed in the generic quoted form.
std::string printModule(const Module &module);

/// Prints one operation (and its regions) using the numbering of its
/// enclosing top-level symbol.
std::string printOperation(const Operation &op);

} // namespace bridgegen::ir
