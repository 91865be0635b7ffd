//===- Fir.hpp - Typed SSA frontend IR -----------------------------------===//
//
// FIR mirrors an optimised, type-inferred SSA form: a function is a list of
// numbered basic blocks (1-based) of invoke/phi/goto/gotoifnot/return
// statements. A `goto #k ifnot c` falls through to the lexically next block
// when `c` holds; a block without a terminator falls through as well.
//
// Text format:
//
//   fn max(_a: i64, _b: i64)
//   1:
//     %1 = invoke >=(_a, _b) :: i1
//     %2 = invoke bool_conversion_intrinsic(%1) :: Bool
//     goto #3 ifnot %2
//   2:
//     goto #4
//   3:
//     nothing
//   4:
//     %6 = phi (#2 => _a, #3 => _b) :: i64
//     return %6
//
// `// ...` starts a comment. `goto #3 if not %2` and `φ` are accepted too.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "bridgegen/Error.hpp"
#include "bridgegen/fir/FrontendType.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bridgegen::fir {

struct FirArg {
  enum class Kind { Ssa, Param, Int, Float, Bool };

  Kind kind = Kind::Int;
  /// SSA id for Ssa, zero-based parameter index for Param.
  std::uint32_t ref = 0;
  std::int64_t intValue = 0;
  double floatValue = 0;
  bool boolValue = false;

  static FirArg ssa(std::uint32_t id) { return {Kind::Ssa, id, 0, 0, false}; }
  static FirArg param(std::uint32_t index) { return {Kind::Param, index, 0, 0, false}; }
  static FirArg integer(std::int64_t v) { return {Kind::Int, 0, v, 0, false}; }
  static FirArg real(double v) { return {Kind::Float, 0, 0, v, false}; }
  static FirArg boolean(bool v) { return {Kind::Bool, 0, 0, 0, v}; }

  bool isSsa() const { return kind == Kind::Ssa; }
  bool isParam() const { return kind == Kind::Param; }
  bool isLiteral() const { return kind == Kind::Int || kind == Kind::Float || kind == Kind::Bool; }

  friend bool operator==(const FirArg &, const FirArg &) = default;
};

struct Invoke {
  std::string target;
  std::vector<FirArg> args;
  FrontendType type;
  friend bool operator==(const Invoke &, const Invoke &) = default;
};

struct PhiIncoming {
  unsigned pred; ///< 1-based block number
  FirArg value;
  friend bool operator==(const PhiIncoming &, const PhiIncoming &) = default;
};

struct Phi {
  std::vector<PhiIncoming> incomings;
  FrontendType type;
  friend bool operator==(const Phi &, const Phi &) = default;
};

struct Goto {
  unsigned target;
  friend bool operator==(const Goto &, const Goto &) = default;
};

struct GotoIfNot {
  FirArg cond;
  unsigned target;
  friend bool operator==(const GotoIfNot &, const GotoIfNot &) = default;
};

struct Return {
  /// Empty for a bare `return` (returns nothing).
  std::optional<FirArg> value;
  friend bool operator==(const Return &, const Return &) = default;
};

struct Nothing {
  friend bool operator==(const Nothing &, const Nothing &) = default;
};

using StatementBody = std::variant<Invoke, Phi, Goto, GotoIfNot, Return, Nothing>;

struct FirStatement {
  /// SSA id of the defined value; 0 for statements that define none.
  std::uint32_t id = 0;
  StatementBody body;

  template <typename T> const T *as() const { return std::get_if<T>(&body); }
  template <typename T> T *as() { return std::get_if<T>(&body); }
  template <typename T> bool is() const { return std::holds_alternative<T>(body); }
  bool isTerminator() const { return is<Goto>() || is<GotoIfNot>() || is<Return>(); }
  bool definesValue() const { return is<Invoke>() || is<Phi>(); }
  /// Result type for Invoke/Phi.
  const FrontendType *type() const;

  friend bool operator==(const FirStatement &, const FirStatement &) = default;
};

struct FirBlock {
  std::vector<FirStatement> statements;
  friend bool operator==(const FirBlock &, const FirBlock &) = default;
};

struct FirFunction {
  std::string name;
  std::vector<std::string> paramNames;
  FrontendTypes paramTypes;
  /// blocks[k - 1] is block #k.
  std::vector<FirBlock> blocks;

  std::size_t numBlocks() const { return blocks.size(); }
  FirBlock &block(unsigned number) { return blocks.at(number - 1); }
  const FirBlock &block(unsigned number) const { return blocks.at(number - 1); }

  friend bool operator==(const FirFunction &, const FirFunction &) = default;
};

struct FirProgram {
  /// Functions in source order.
  std::vector<FirFunction> functions;

  const FirFunction *find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
};

//===----------------------------------------------------------------------===//
// CFG and typing helpers
//===----------------------------------------------------------------------===//

/// Successor block numbers of block `number` in branch order: for a
/// GotoIfNot the fall-through (true) block comes first, then the target.
std::vector<unsigned> successors(const FirFunction &fn, unsigned number);
/// Predecessors of every block, indexed by block number - 1, sorted.
std::vector<std::vector<unsigned>> predecessors(const FirFunction &fn);
/// Reachability from block 1, indexed by block number - 1.
std::vector<bool> reachableBlocks(const FirFunction &fn);

/// Where an SSA id is defined.
struct DefSite {
  unsigned block;     ///< 1-based
  std::size_t index;  ///< statement index within the block
  std::size_t position; ///< 1-based position over the whole function
};
std::map<std::uint32_t, DefSite> definitionSites(const FirFunction &fn);

/// Frontend type of an argument: the defining statement's type, the
/// parameter type, or the natural literal type.
FrontendType typeOf(const FirFunction &fn, const FirArg &arg);

/// Renumbers SSA ids to statement positions (1-based over all statements in
/// block order) and rewrites every reference.
FirFunction normalize(const FirFunction &fn);

/// Text form accepted by parseProgram.
std::string printFunction(const FirFunction &fn);
std::string printProgram(const FirProgram &program);
std::string printArg(const FirFunction &fn, const FirArg &arg);

} // namespace bridgegen::fir
