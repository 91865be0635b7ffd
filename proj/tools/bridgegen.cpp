// bridgegen: FIR files to IR text, IR execution, einsum lowering and module
// verification.
//
// Exit codes: 0 success, 1 pipeline or diagnostic failure, 2 usage error.

#include "bridgegen/driver/Driver.hpp"
#include "bridgegen/einsum/Einsum.hpp"
#include "bridgegen/fir/Parser.hpp"
#include "bridgegen/interp/Interpreter.hpp"
#include "bridgegen/ir/Printer.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace bridgegen;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeOutput(const std::string &text, const std::string &outPath) {
  if (outPath.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(outPath, std::ios::binary);
  if (!out)
    throw UsageError("cannot write '" + outPath + "'");
  out << text;
}

struct CommonConfig {
  std::string input;
  std::string entry;
  std::string types;
  std::string out;
  std::vector<std::string> dialects;
};

codegen::IntrinsicRegistry registryFor(const CommonConfig &cfg) {
  std::vector<std::string> specs;
  for (const auto &path : cfg.dialects)
    specs.push_back(readFile(path));
  try {
    return driver::defaultRegistry(specs);
  } catch (const Error &e) {
    throw driver::PipelineError("dialect", e.what());
  }
}

driver::Compiled compileFile(const codegen::IntrinsicRegistry &registry, const CommonConfig &cfg,
                             std::string &entry) {
  std::string source = readFile(cfg.input);
  fir::FirProgram program;
  try {
    program = fir::parseProgram(source, registry.lattice());
  } catch (const Error &e) {
    throw driver::PipelineError("parse", cfg.input + ": " + e.what());
  }
  if (program.functions.empty())
    throw driver::PipelineError("parse", cfg.input + ": no functions");
  entry = cfg.entry.empty() ? program.functions.back().name : cfg.entry;
  const fir::FirFunction *fn = program.find(entry);
  if (!fn)
    throw UsageError("no function named '" + entry + "' in " + cfg.input);

  fir::FrontendTypes argTypes;
  if (cfg.types.empty()) {
    for (const auto &t : fn->paramTypes)
      if (!t.isConcrete())
        throw UsageError("'" + entry + "' has abstract parameter types; pass --types");
    argTypes = fn->paramTypes;
  } else {
    try {
      argTypes = registry.lattice().parseList(cfg.types);
    } catch (const Error &e) {
      throw UsageError(std::string("--types: ") + e.what());
    }
  }
  try {
    return driver::compile(registry, program, entry, argTypes);
  } catch (const driver::ArityError &e) {
    throw UsageError(e.what());
  }
}

interp::LaunchConfig parseLaunch(const std::string &text) {
  std::vector<std::int64_t> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoll(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw UsageError("--launch: '" + item + "' is not an integer");
    }
  }
  if (v.size() != 6)
    throw UsageError("--launch takes gx,gy,gz,bx,by,bz");
  interp::LaunchConfig launch;
  for (int d = 0; d < 3; ++d) {
    launch.grid[d] = v[d];
    launch.block[d] = v[d + 3];
    if (v[d] < 1 || v[d + 3] < 1)
      throw UsageError("--launch extents must be at least 1");
  }
  return launch;
}

interp::Options interpOptions(bool reverse) {
  interp::Options options;
  options.reverseThreadOrder = reverse;
  if (const char *env = std::getenv("BRIDGEGEN_STEP_LIMIT")) {
    try {
      options.stepLimit = std::stoull(env);
    } catch (const std::exception &) {
      throw UsageError(std::string("BRIDGEGEN_STEP_LIMIT: '") + env + "' is not a number");
    }
  }
  return options;
}

std::vector<std::vector<std::int64_t>> parseShapes(const std::string &text) {
  std::vector<std::vector<std::int64_t>> shapes;
  std::stringstream ss(text);
  std::string shape;
  while (std::getline(ss, shape, ',')) {
    std::vector<std::int64_t> dims;
    std::stringstream ds(shape);
    std::string d;
    while (std::getline(ds, d, 'x')) {
      try {
        std::size_t used = 0;
        dims.push_back(std::stoll(d, &used));
        if (used != d.size() || dims.back() < 0)
          throw std::invalid_argument(d);
      } catch (const std::exception &) {
        throw UsageError("--shapes: bad extent '" + d + "'");
      }
    }
    shapes.push_back(std::move(dims));
  }
  return shapes;
}

int cmdGen(const CommonConfig &cfg) {
  auto registry = registryFor(cfg);
  std::string entry;
  auto compiled = compileFile(registry, cfg, entry);
  writeOutput(ir::printModule(*compiled.module), cfg.out);
  return kOk;
}

int cmdRun(const CommonConfig &cfg, const std::string &launchText, bool reverse,
           const std::vector<std::string> &values) {
  auto registry = registryFor(cfg);
  std::optional<interp::LaunchConfig> launch;
  if (!launchText.empty())
    launch = parseLaunch(launchText);
  interp::Options options = interpOptions(reverse);
  std::string entry;
  auto compiled = compileFile(registry, cfg, entry);

  const ir::Operation *func = compiled.module->lookupSymbol(entry);
  const ir::Type &fty = func->attr("function_type")->typeValue();
  if (values.size() != fty.inputs().size())
    throw UsageError("'" + entry + "' takes " + std::to_string(fty.inputs().size()) + " inputs, got " +
                     std::to_string(values.size()));
  std::vector<interp::RuntimeValue> inputs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    try {
      inputs.push_back(interp::parseRuntimeValue(values[i], &fty.inputs()[i]));
    } catch (const Error &e) {
      throw UsageError("input " + std::to_string(i + 1) + ": " + e.what());
    }
  }

  std::vector<interp::RuntimeValue> outputs;
  if (launch) {
    auto after = interp::runKernel(*compiled.module, entry, *launch, inputs, options);
    for (const auto &v : after)
      if (v.kind() == interp::RuntimeValue::Kind::MemRef)
        outputs.push_back(v);
  } else {
    outputs = interp::runFunction(*compiled.module, entry, inputs, options);
  }
  std::string text;
  for (const auto &v : outputs)
    text += v.str() + "\n";
  writeOutput(text, cfg.out);
  return kOk;
}

int cmdEinsum(const std::string &specText, const std::string &shapesText, const std::string &elem,
              const std::string &out) {
  codegen::IntrinsicRegistry registry = driver::defaultRegistry();
  fir::FrontendType elemType;
  try {
    elemType = registry.lattice().parse(elem);
  } catch (const Error &e) {
    throw UsageError(std::string("--elem: ") + e.what());
  }
  std::optional<std::vector<std::vector<std::int64_t>>> shapes;
  if (!shapesText.empty())
    shapes = parseShapes(shapesText);
  auto spec = einsum::parseEinsum(specText);
  auto module = einsum::buildEinsumModule(registry, spec, elemType, shapes);
  if (auto report = ir::verifyModule(*module, &registry.dialects()); !report.ok())
    throw driver::PipelineError("verify", report.str());
  writeOutput(ir::printModule(*module), out);
  return kOk;
}

int cmdVerify(const CommonConfig &cfg) {
  auto registry = registryFor(cfg);
  std::string text = readFile(cfg.input);
  ir::ModulePtr module;
  try {
    module = driver::loadModuleJson(text);
  } catch (const Error &e) {
    throw driver::PipelineError("load", e.what());
  }
  auto report = ir::verifyModule(*module, &registry.dialects());
  if (!report.ok()) {
    std::cerr << report.str();
    if (!report.str().empty() && report.str().back() != '\n')
      std::cerr << '\n';
    return kFailure;
  }
  writeOutput(ir::printModule(*module), cfg.out);
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"bridgegen: frontend IR to MLIR-style IR"};
  app.require_subcommand(1);

  CommonConfig gen;
  auto *genCmd = app.add_subcommand("gen", "Translate a FIR file and print the module");
  genCmd->add_option("input", gen.input, "FIR source file")->required();
  genCmd->add_option("--entry", gen.entry, "Entry function (default: last in file)");
  genCmd->add_option("--types", gen.types, "Comma-separated argument types, e.g. i64,i64");
  genCmd->add_option("--out,-o", gen.out, "Write the module here instead of stdout");
  genCmd->add_option("--dialect", gen.dialects, "Extra dialect spec file (repeatable)");

  CommonConfig run;
  std::string launch;
  bool reverse = false;
  std::vector<std::string> values;
  auto *runCmd = app.add_subcommand("run", "Translate and interpret; inputs follow '--'");
  runCmd->add_option("input", run.input, "FIR source file")->required();
  runCmd->add_option("values", values, "Input literals: 2.0, 7, [1,2,3]:f32, [1..8]:f32");
  runCmd->add_option("--entry", run.entry, "Entry function (default: last in file)");
  runCmd->add_option("--types", run.types, "Comma-separated argument types");
  runCmd->add_option("--launch", launch, "Kernel launch gx,gy,gz,bx,by,bz");
  runCmd->add_flag("--reverse-threads", reverse, "Simulate threads in reverse order");
  runCmd->add_option("--out,-o", run.out, "Write outputs here instead of stdout");
  runCmd->add_option("--dialect", run.dialects, "Extra dialect spec file (repeatable)");

  std::string spec, shapes, elem = "f32", einsumOut;
  auto *einsumCmd = app.add_subcommand("einsum", "Lower an einsum spec such as \"(i,k),(k,j)->(i,j)\"");
  einsumCmd->add_option("spec", spec, "Einsum spec")->required();
  einsumCmd->add_option("--shapes", shapes, "Operand shapes, e.g. 4x3,3x5");
  einsumCmd->add_option("--elem", elem, "Element type (f32 or f64)");
  einsumCmd->add_option("--out,-o", einsumOut, "Write the module here instead of stdout");

  CommonConfig verify;
  auto *verifyCmd = app.add_subcommand("verify", "Verify a JSON module description");
  verifyCmd->add_option("input", verify.input, "JSON module file")->required();
  verifyCmd->add_option("--out,-o", verify.out, "Write the printed module here instead of stdout");
  verifyCmd->add_option("--dialect", verify.dialects, "Extra dialect spec file (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*genCmd)
      return cmdGen(gen);
    if (*runCmd)
      return cmdRun(run, launch, reverse, values);
    if (*einsumCmd)
      return cmdEinsum(spec, shapes, elem, einsumOut);
    return cmdVerify(verify);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const driver::PipelineError &e) {
    std::cerr << e.what() << "\n";
    return kFailure;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
