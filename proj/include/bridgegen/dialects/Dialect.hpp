//===- Dialect.hpp - Declarative op definitions and builders -------------===//
//
// Dialects are described in a small line-oriented text format and loaded into
// OpDefinitions. A DialectRegistry turns those definitions into typed builder
// entry points (buildOp) and into the per-op checks used by the verifier.
//
//   dialect arith
//   op addf "Floating-point addition."
//     operand lhs AnyFloat
//     operand rhs same(0)
//     result res same(0)
//
// Constraints: f32|f64|i1|i8|i16|i32|i64|index|AnyFloat|AnyInteger|AnyTensor|
// AnyMemRef|Any|same(k)|elem(k). `same(k)` is the type of operand spec k
// (which must come earlier); `elem(k)` is the element type of the shaped
// operand spec k. AnyInteger admits index. An operand or result spec may be
// marked `variadic`; at most one of each per op.
//
// Attribute kinds: float|int|typed|string|array|index_map|symbol|type|
// enum(a|b|...), optionally followed by `required`.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "bridgegen/Error.hpp"
#include "bridgegen/ir/IR.hpp"
#include "bridgegen/ir/Verifier.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bridgegen::dialects {

class DialectError : public Error {
public:
  using Error::Error;
};

class SpecParseError : public DialectError {
public:
  SpecParseError(unsigned line, const std::string &message)
      : DialectError("line " + std::to_string(line) + ": " + message), line_(line) {}
  unsigned line() const { return line_; }

private:
  unsigned line_;
};

struct TypeConstraint {
  enum class Kind { Exact, AnyFloat, AnyInteger, AnyTensor, AnyMemRef, Any, SameAs, ElementOf };

  Kind kind = Kind::Any;
  ir::Type exact;
  unsigned ref = 0;

  static TypeConstraint parse(std::string_view text);
  std::string str() const;
  /// Whether the result type is determined without caller input.
  bool determinesType() const { return kind == Kind::Exact || kind == Kind::SameAs || kind == Kind::ElementOf; }

  friend bool operator==(const TypeConstraint &, const TypeConstraint &) = default;
};

struct ValueSpec {
  std::string name;
  TypeConstraint constraint;
  bool variadic = false;
  friend bool operator==(const ValueSpec &, const ValueSpec &) = default;
};

enum class AttrKind { Float, Int, Typed, String, Array, IndexMap, Symbol, Type, Enum };

struct AttrSpec {
  std::string name;
  AttrKind kind = AttrKind::String;
  std::vector<std::string> enumerants;
  bool required = false;
  std::string kindStr() const;
  friend bool operator==(const AttrSpec &, const AttrSpec &) = default;
};

struct OpDefinition {
  std::string dialect;
  std::string name;
  std::string doc;
  std::vector<ValueSpec> operands;
  std::vector<ValueSpec> results;
  std::vector<AttrSpec> attributes;
  unsigned numRegions = 0;
  bool terminator = false;
  /// Fixed successor count; nullopt means variadic.
  std::optional<unsigned> numSuccessors = 0;

  std::string qualifiedName() const { return dialect + "." + name; }
  const AttrSpec *attrSpec(std::string_view attr) const;
  friend bool operator==(const OpDefinition &, const OpDefinition &) = default;
};

struct DialectDefinition {
  std::string name;
  /// Ops in declaration order.
  std::vector<OpDefinition> ops;

  const OpDefinition *lookup(std::string_view shortName) const;
  friend bool operator==(const DialectDefinition &, const DialectDefinition &) = default;
};

/// Parses the dialect spec format. Throws SpecParseError with a line number.
DialectDefinition loadDialectSpec(std::string_view text);
/// Canonical text form; loadDialectSpec(serializeDialect(d)) == d.
std::string serializeDialect(const DialectDefinition &dialect);

/// Arguments to buildOp. Empty `resultTypes` asks the builder to infer them.
struct OpArgs {
  ir::ValueList operands;
  ir::AttrMap attributes;
  std::vector<ir::Successor> successors;
  std::vector<ir::Type> resultTypes;
};

class DialectRegistry : public ir::OpInfoProvider {
public:
  /// Throws DialectError if a dialect of that name is already registered.
  void registerDialect(DialectDefinition dialect);
  bool hasDialect(std::string_view name) const;
  const DialectDefinition *dialect(std::string_view name) const;
  /// Lookup by qualified name ("arith.addf").
  const OpDefinition *lookup(std::string_view qualifiedName) const;
  std::vector<std::string> opNames() const;

  bool knowsOp(std::string_view name) const override { return lookup(name) != nullptr; }
  bool isTerminator(std::string_view name) const override;
  void checkOp(const ir::Operation &op, std::vector<ir::Diagnostic> &out) const override;

private:
  std::map<std::string, DialectDefinition, std::less<>> dialects_;
};

/// Validates `args` against the definition of `name`, resolves result types
/// from the constraints and creates the operation at the module's insertion
/// point. Throws DialectError on unknown ops, arity or type-constraint
/// violations (naming the offending operand) and missing attributes.
ir::Operation &buildOp(const DialectRegistry &registry, ir::Module &module, std::string_view name, OpArgs args);

/// Result types implied by the definition for the given operands, or throws
/// when a result is not determined by its constraint. A lone result with a
/// free constraint takes the type of the op's only typed attribute, if any.
std::vector<ir::Type> inferResultTypes(const OpDefinition &def, const ir::ValueList &operands,
                                       const ir::AttrMap &attributes = {});

/// Definition checks shared by buildOp and the verifier.
void checkAgainstDefinition(const OpDefinition &def, const std::vector<ir::Type> &operandTypes,
                            const std::vector<ir::Type> &resultTypes, const ir::AttrMap &attributes,
                            std::size_t numRegions, std::size_t numSuccessors, const ir::Operation *op,
                            std::uint32_t blockId, std::vector<ir::Diagnostic> &out);

/// Spec text of a builtin dialect (arith, math, cf, func, linalg, gpu,
/// memref), or empty when unknown.
std::string_view builtinDialectSpec(std::string_view name);
std::vector<std::string> builtinDialectNames();

/// Registry preloaded with every builtin dialect.
std::shared_ptr<DialectRegistry> builtinRegistry();

} // namespace bridgegen::dialects
