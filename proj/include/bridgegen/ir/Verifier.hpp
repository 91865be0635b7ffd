#pragma once

#include "bridgegen/ir/IR.hpp"

#include <string>
#include <vector>

namespace bridgegen::ir {

enum class DiagCategory {
  MissingTerminator,
  MisplacedTerminator,
  Dominance,
  Arity,
  TypeConstraint,
  MissingAttribute,
  UnknownOp,
  BadSuccessor,
  RegionCount,
  DuplicateSymbol,
  Structure,
};

const char *categoryName(DiagCategory category);

struct Diagnostic {
  DiagCategory category;
  std::string opName;
  std::uint32_t blockId = 0;
  std::string message;

  std::string str() const;
};

struct VerificationReport {
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
  bool has(DiagCategory category) const;
  std::string str() const;
};

/// Per-operation knowledge supplied by a dialect registry.
class OpInfoProvider {
public:
  virtual ~OpInfoProvider() = default;
  virtual bool knowsOp(std::string_view name) const = 0;
  virtual bool isTerminator(std::string_view name) const = 0;
  /// Appends arity/type/attribute/region diagnostics for a known op.
  virtual void checkOp(const Operation &op, std::vector<Diagnostic> &out) const = 0;
};

/// Structural verification. Without a provider, an operation counts as a
/// terminator when it has successors or its name ends in ".return" or
/// ".yield", and per-op definition checks are skipped.
VerificationReport verifyModule(const Module &module, const OpInfoProvider *ops = nullptr);

/// Immediate dominators of the blocks of `region` (index into the region);
/// the entry maps to itself and unreachable blocks to nullopt.
std::vector<std::optional<std::size_t>> computeDominators(const Region &region);

} // namespace bridgegen::ir
