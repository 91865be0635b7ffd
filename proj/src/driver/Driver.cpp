#include "bridgegen/driver/Driver.hpp"

#include "bridgegen/codegen/Standard.hpp"
#include "bridgegen/fir/Parser.hpp"
#include "bridgegen/fir/Passes.hpp"
#include "bridgegen/gpu/Gpu.hpp"

namespace bridgegen::driver {

codegen::IntrinsicRegistry defaultRegistry(const std::vector<std::string> &extraDialectSpecs) {
  auto dialects = dialects::builtinRegistry();
  for (const auto &text : extraDialectSpecs)
    dialects->registerDialect(dialects::loadDialectSpec(text));
  codegen::IntrinsicRegistry registry(dialects);
  codegen::registerScalarIntrinsics(registry);
  gpu::registerGpuIntrinsics(registry);
  return registry;
}

fir::IntrinsicPredicate intrinsicPredicate(const codegen::IntrinsicRegistry &registry,
                                           const fir::FirProgram &program) {
  return [&registry, &program](const std::string &name, const fir::FrontendTypes &argTypes) {
    if (name == fir::kBoolConversion)
      return true;
    if (registry.lookup(name, argTypes).found())
      return true;
    return !program.contains(name);
  };
}

Compiled compile(const codegen::IntrinsicRegistry &registry, const fir::FirProgram &program, std::string_view entry,
                 const fir::FrontendTypes &argTypes) {
  const fir::FirFunction *fn = program.find(entry);
  if (!fn)
    throw PipelineError("parse", "no function named '" + std::string(entry) + "'");
  if (fn->paramTypes.size() != argTypes.size())
    throw ArityError("'" + fn->name + "' takes " + std::to_string(fn->paramTypes.size()) + " arguments but " +
                     std::to_string(argTypes.size()) + " types were given");

  for (const auto &f : program.functions)
    if (auto report = fir::validateFir(f); !report.ok())
      throw PipelineError("validate", f.name + ":\n" + report.str());

  Compiled out;
  try {
    out.lowered = fir::inlineCalls(program, entry, intrinsicPredicate(registry, program));
  } catch (const Error &e) {
    throw PipelineError("inline", e.what());
  }
  out.lowered = fir::insertBoolConversions(out.lowered);
  if (auto report = fir::validateFir(out.lowered); !report.ok())
    throw PipelineError("validate", out.lowered.name + " after lowering:\n" + report.str());

  try {
    out.module = codegen::generate(registry, out.lowered, argTypes);
  } catch (const Error &e) {
    throw PipelineError("generate", e.what());
  }
  if (auto report = ir::verifyModule(*out.module, &registry.dialects()); !report.ok())
    throw PipelineError("verify", report.str());
  return out;
}

Compiled compileSource(const codegen::IntrinsicRegistry &registry, std::string_view source, std::string_view entry,
                       std::string_view types) {
  fir::FirProgram program;
  fir::FrontendTypes argTypes;
  try {
    program = fir::parseProgram(source, registry.lattice());
  } catch (const Error &e) {
    throw PipelineError("parse", e.what());
  }
  try {
    if (!types.empty())
      argTypes = registry.lattice().parseList(types);
  } catch (const Error &e) {
    throw PipelineError("parse", std::string("argument types: ") + e.what());
  }
  return compile(registry, program, entry, argTypes);
}

} // namespace bridgegen::driver
