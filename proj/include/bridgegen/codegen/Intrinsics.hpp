//===- Intrinsics.hpp - Intrinsic registry and dispatch ------------------===//
//
// An intrinsic is a frontend function whose body builds IR instead of being
// translated. The registry maps (name, parameter types) to builder callbacks
// and resolves calls with multiple dispatch: among the signatures whose
// parameters are supertypes of the argument types, the unique most specific
// one wins.
//
// The registry also owns the frontend-to-IR type mapping, the control-flow
// hooks used for goto/gotoifnot/return, and conversions from condition types
// to a branchable i1.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "bridgegen/dialects/Dialect.hpp"
#include "bridgegen/fir/FrontendType.hpp"
#include "bridgegen/ir/IR.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bridgegen::codegen {

using fir::FrontendType;
using fir::FrontendTypes;

class CodegenError : public Error {
public:
  using Error::Error;
};

class NoMethodError : public CodegenError {
public:
  using CodegenError::CodegenError;
};

class AmbiguousError : public CodegenError {
public:
  using CodegenError::CodegenError;
};

struct IntrinsicSignature {
  std::string name;
  FrontendTypes params;

  std::string str() const;
  friend bool operator==(const IntrinsicSignature &, const IntrinsicSignature &) = default;
};

class BuilderContext;

/// What an intrinsic builder receives. Each argument is the list of IR values
/// its frontend value unpacks to (one for primitive types).
struct IntrinsicCall {
  BuilderContext &ctx;
  std::vector<ir::ValueList> args;
  /// Argument types used for dispatch (after literal promotion).
  FrontendTypes argTypes;
  /// Declared result type of the invoke statement.
  FrontendType resultType;

  /// The single value of argument `i`; throws if it unpacks to several.
  ir::Value arg(std::size_t i) const;
};

using IntrinsicBuilder = std::function<ir::ValueList(IntrinsicCall &)>;

struct Method {
  IntrinsicSignature signature;
  IntrinsicBuilder builder;
};

struct Resolution {
  enum class Status { Found, NoMethod, Ambiguous };
  Status status = Status::NoMethod;
  const Method *method = nullptr;
  /// Tied minimal candidates for Ambiguous.
  std::vector<const Method *> candidates;

  bool found() const { return status == Status::Found; }
};

class IntrinsicRegistry {
public:
  using GotoHook = std::function<void(BuilderContext &, ir::Block *dest, const ir::ValueList &args)>;
  using GotoIfNotHook =
      std::function<void(BuilderContext &, ir::Value cond, ir::Block *trueDest, const ir::ValueList &trueArgs,
                         ir::Block *falseDest, const ir::ValueList &falseArgs)>;
  using ReturnHook = std::function<void(BuilderContext &, const ir::ValueList &values)>;
  using BoolConversion = std::function<ir::Value(BuilderContext &, const ir::ValueList &values)>;
  using ParametricMapper = std::function<std::vector<ir::Type>(const FrontendType &, const IntrinsicRegistry &)>;
  using StructLayout = std::function<FrontendTypes(const FrontendType &)>;

  /// Registry with the given dialects, the standard primitive type mapping,
  /// tensor/memref/Complex mappings and the default cf/func hooks. No
  /// intrinsics are registered.
  explicit IntrinsicRegistry(std::shared_ptr<const dialects::DialectRegistry> dialects = dialects::builtinRegistry(),
                             fir::TypeLattice lattice = fir::TypeLattice::standard());

  const dialects::DialectRegistry &dialects() const { return *dialects_; }
  std::shared_ptr<const dialects::DialectRegistry> dialectsPtr() const { return dialects_; }
  const fir::TypeLattice &lattice() const { return lattice_; }
  fir::TypeLattice &lattice() { return lattice_; }

  // Methods.
  /// Throws CodegenError for an exact duplicate signature.
  void registerIntrinsic(IntrinsicSignature signature, IntrinsicBuilder builder);
  bool hasMethods(std::string_view name) const;
  std::vector<const Method *> methods(std::string_view name) const;
  Resolution lookup(std::string_view name, const FrontendTypes &argTypes) const;
  /// Throws NoMethodError or AmbiguousError.
  const Method &resolve(std::string_view name, const FrontendTypes &argTypes) const;

  // Type mapping.
  void mapPrimitive(const std::string &name, ir::Type type);
  void mapParametric(const std::string &name, ParametricMapper mapper);
  /// A structured type that unpacks into the given field types.
  void defineStruct(const std::string &name, StructLayout layout);
  /// IR types a concrete frontend type unpacks to, in field order.
  std::vector<ir::Type> mapType(const FrontendType &type) const;
  /// Frontend type for an IR type, inverting the primitive and tensor/memref
  /// mappings. Integer i1 maps to i1, not Bool.
  std::optional<FrontendType> frontendTypeFor(const ir::Type &type) const;

  // Control flow.
  void setGotoHook(GotoHook hook) { gotoHook_ = std::move(hook); }
  void setGotoIfNotHook(GotoIfNotHook hook) { gotoIfNotHook_ = std::move(hook); }
  void setReturnHook(ReturnHook hook) { returnHook_ = std::move(hook); }
  const GotoHook &gotoHook() const { return gotoHook_; }
  const GotoIfNotHook &gotoIfNotHook() const { return gotoIfNotHook_; }
  const ReturnHook &returnHook() const { return returnHook_; }

  // Bool conversion.
  void registerBoolConversion(const FrontendType &conditionType, BoolConversion conversion);
  /// Conversion for the condition type, or null. Types mapping to a single i1
  /// need no entry.
  const BoolConversion *boolConversion(const FrontendType &conditionType) const;

private:
  std::shared_ptr<const dialects::DialectRegistry> dialects_;
  fir::TypeLattice lattice_;
  std::map<std::string, std::vector<Method>, std::less<>> methods_;
  std::map<std::string, ir::Type, std::less<>> primitives_;
  std::map<std::string, ParametricMapper, std::less<>> parametric_;
  std::map<std::string, StructLayout, std::less<>> structs_;
  GotoHook gotoHook_;
  GotoIfNotHook gotoIfNotHook_;
  ReturnHook returnHook_;
  std::vector<std::pair<FrontendType, BoolConversion>> boolConversions_;
};

} // namespace bridgegen::codegen
