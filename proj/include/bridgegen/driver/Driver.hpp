//===- Driver.hpp - End-to-end pipeline ----------------------------------===//
//
// parse FIR -> validate -> inline -> bool-convert -> generate -> verify.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "bridgegen/codegen/Generate.hpp"
#include "bridgegen/fir/Fir.hpp"
#include "bridgegen/fir/Passes.hpp"
#include "bridgegen/ir/Verifier.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bridgegen::driver {

/// Failure of one pipeline stage. `stage()` is one of parse, validate,
/// inline, generate, verify.
class PipelineError : public Error {
public:
  PipelineError(std::string stage, const std::string &msg) : Error(stage + " error: " + msg), stage_(std::move(stage)) {}
  const std::string &stage() const { return stage_; }

private:
  std::string stage_;
};

/// Wrong number of argument types for the entry function.
class ArityError : public Error {
public:
  using Error::Error;
};

/// Builtin dialects plus `extraDialectSpecs` (spec texts), with the scalar
/// and GPU intrinsics registered.
codegen::IntrinsicRegistry defaultRegistry(const std::vector<std::string> &extraDialectSpecs = {});

/// Inlining predicate: a call stays when the registry resolves it, when it
/// names the bool conversion, or when the program does not define it.
fir::IntrinsicPredicate intrinsicPredicate(const codegen::IntrinsicRegistry &registry, const fir::FirProgram &program);

struct Compiled {
  /// Entry after inlining and bool conversion.
  fir::FirFunction lowered;
  ir::ModulePtr module;
};

/// Runs the pipeline on `entry`. Throws ArityError before any work when the
/// type count differs from the entry's parameter count, PipelineError
/// otherwise. The returned module has passed verification.
Compiled compile(const codegen::IntrinsicRegistry &registry, const fir::FirProgram &program, std::string_view entry,
                 const fir::FrontendTypes &argTypes);

/// Parses `source` and `types` (comma-separated) first.
Compiled compileSource(const codegen::IntrinsicRegistry &registry, std::string_view source, std::string_view entry,
                       std::string_view types);

class ModuleLoadError : public Error {
public:
  using Error::Error;
};

/// Loads a structural module description:
///
///   {"ops": [op...]}
///   op:    {"name": "arith.addi", "operands": ["%a", "%b"],
///           "results": [{"name": "%r", "type": "i64"}],
///           "attributes": {...}, "successors": [{"block": 1, "args": []}],
///           "regions": [[block...]]}
///   block: {"args": [{"name": "%x", "type": "i64"}], "ops": [op...]}
///
/// Attributes are JSON strings (string attribute), numbers (i64/f64),
/// arrays, or objects {"int": v, "type": t}, {"float": v, "type": t},
/// {"symbol": s}, {"type": t}, {"map": {"dims": n, "results": [...]}}.
/// Operands and successors resolve after every value exists, so a use
/// before its definition loads and is left to the verifier; a successor
/// index outside its region becomes a detached block.
ir::ModulePtr loadModuleJson(std::string_view text);

} // namespace bridgegen::driver
