// Python bindings: FIR translation, interpretation, einsum and verification.

#include "bridgegen/driver/Driver.hpp"
#include "bridgegen/einsum/Einsum.hpp"
#include "bridgegen/fir/Parser.hpp"
#include "bridgegen/interp/Interpreter.hpp"
#include "bridgegen/ir/Printer.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace bridgegen;

namespace {

struct Prepared {
  codegen::IntrinsicRegistry registry;
  driver::Compiled compiled;
  std::string entry;
};

Prepared prepare(const std::string &source, const std::string &entry, const std::string &types,
                 const std::vector<std::string> &dialects) {
  codegen::IntrinsicRegistry registry = driver::defaultRegistry(dialects);
  fir::FirProgram program;
  try {
    program = fir::parseProgram(source, registry.lattice());
  } catch (const Error &e) {
    throw driver::PipelineError("parse", e.what());
  }
  if (program.functions.empty())
    throw driver::PipelineError("parse", "no functions");
  std::string name = entry.empty() ? program.functions.back().name : entry;
  const fir::FirFunction *fn = program.find(name);
  if (!fn)
    throw py::value_error("no function named '" + name + "'");
  fir::FrontendTypes argTypes;
  if (types.empty()) {
    for (const auto &t : fn->paramTypes)
      if (!t.isConcrete())
        throw py::value_error("'" + name + "' has abstract parameter types; pass types");
    argTypes = fn->paramTypes;
  } else {
    argTypes = registry.lattice().parseList(types);
  }
  auto compiled = driver::compile(registry, program, name, argTypes);
  return {std::move(registry), std::move(compiled), name};
}

ir::Type elementTypeOf(const py::dtype &dt) {
  if (dt.is(py::dtype::of<float>()))
    return ir::Type::f32();
  if (dt.is(py::dtype::of<double>()))
    return ir::Type::f64();
  if (dt.is(py::dtype::of<std::int64_t>()))
    return ir::Type::integer(64);
  throw py::type_error("unsupported array dtype " + py::str(dt).cast<std::string>());
}

std::shared_ptr<interp::Buffer> toBuffer(const py::array &arr, const ir::Type &elem) {
  std::vector<std::int64_t> dims(arr.shape(), arr.shape() + arr.ndim());
  auto buf = interp::RuntimeValue::makeBuffer(elem, dims);
  if (elem.isFloat()) {
    auto a = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(arr);
    buf->floats.assign(a.data(), a.data() + a.size());
  } else {
    auto a = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>::ensure(arr);
    buf->ints.assign(a.data(), a.data() + a.size());
  }
  return buf;
}

interp::RuntimeValue toRuntime(const py::handle &obj, const ir::Type &expected) {
  if (py::isinstance<py::str>(obj))
    return interp::parseRuntimeValue(obj.cast<std::string>(), &expected);
  if (py::isinstance<py::array>(obj) || py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    if (!expected.isShaped())
      throw py::type_error("got an array where " + expected.str() + " is expected");
    auto buf = toBuffer(py::array::ensure(obj), expected.elementType());
    auto v = expected.isMemRef() ? interp::RuntimeValue::memref(buf) : interp::RuntimeValue::tensor(buf);
    if (!v.conformsTo(expected))
      throw py::value_error("array of type " + v.type().str() + " does not match " + expected.str());
    return v;
  }
  if (expected.isShaped())
    throw py::type_error("expected an array for " + expected.str());
  if (py::isinstance<py::bool_>(obj) || py::isinstance<py::int_>(obj)) {
    auto i = obj.cast<std::int64_t>();
    return expected.isFloat() ? interp::RuntimeValue::scalar(expected, static_cast<double>(i))
                              : interp::RuntimeValue::scalarInt(expected, i);
  }
  if (py::isinstance<py::float_>(obj)) {
    if (!expected.isFloat())
      throw py::type_error("got a float where " + expected.str() + " is expected");
    return interp::RuntimeValue::scalar(expected, obj.cast<double>());
  }
  throw py::type_error("unsupported input " + py::repr(obj).cast<std::string>());
}

py::object toPython(const interp::RuntimeValue &v) {
  using K = interp::RuntimeValue::Kind;
  switch (v.kind()) {
  case K::F32:
    return py::float_(v.asF32());
  case K::F64:
    return py::float_(v.asF64());
  case K::Int:
    if (v.width() == 1)
      return py::bool_(v.intValue() != 0);
    return py::int_(v.intValue());
  case K::Index:
    return py::int_(v.intValue());
  case K::Tensor:
  case K::MemRef:
    break;
  }
  const interp::Buffer &b = *v.buffer();
  std::vector<py::ssize_t> shape(b.dims.begin(), b.dims.end());
  if (b.elementType == ir::Type::f32()) {
    py::array_t<float> out(shape);
    std::copy(b.floats.begin(), b.floats.end(), out.mutable_data());
    return std::move(out);
  }
  if (b.isFloat()) {
    py::array_t<double> out(shape);
    std::copy(b.floats.begin(), b.floats.end(), out.mutable_data());
    return std::move(out);
  }
  py::array_t<std::int64_t> out(shape);
  std::copy(b.ints.begin(), b.ints.end(), out.mutable_data());
  return std::move(out);
}

std::string generate(const std::string &source, const std::string &entry, const std::string &types,
                     const std::vector<std::string> &dialects) {
  return ir::printModule(*prepare(source, entry, types, dialects).compiled.module);
}

std::string lower(const std::string &source, const std::string &entry, const std::string &types) {
  return fir::printFunction(prepare(source, entry, types, {}).compiled.lowered);
}

py::list run(const std::string &source, const py::sequence &inputs, const std::string &entry,
             const std::string &types, std::optional<std::array<std::int64_t, 6>> launch, bool reverseThreads,
             std::uint64_t stepLimit) {
  auto p = prepare(source, entry, types, {});
  const ir::Type &fty = p.compiled.module->lookupSymbol(p.entry)->attr("function_type")->typeValue();
  if (inputs.size() != fty.inputs().size())
    throw py::value_error("'" + p.entry + "' takes " + std::to_string(fty.inputs().size()) + " inputs, got " +
                          std::to_string(inputs.size()));
  std::vector<interp::RuntimeValue> args;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    args.push_back(toRuntime(inputs[i], fty.inputs()[i]));

  interp::Options options;
  options.stepLimit = stepLimit;
  options.reverseThreadOrder = reverseThreads;
  py::list out;
  if (launch) {
    interp::LaunchConfig cfg;
    for (int d = 0; d < 3; ++d) {
      cfg.grid[d] = (*launch)[d];
      cfg.block[d] = (*launch)[d + 3];
    }
    for (const auto &v : interp::runKernel(*p.compiled.module, p.entry, cfg, args, options))
      if (v.kind() == interp::RuntimeValue::Kind::MemRef)
        out.append(toPython(v));
  } else {
    for (const auto &v : interp::runFunction(*p.compiled.module, p.entry, args, options))
      out.append(toPython(v));
  }
  return out;
}

std::string einsumModule(const std::string &spec, const std::string &elem,
                         std::optional<std::vector<std::vector<std::int64_t>>> shapes) {
  auto registry = driver::defaultRegistry();
  auto m = einsum::buildEinsumModule(registry, einsum::parseEinsum(spec), registry.lattice().parse(elem), shapes);
  return ir::printModule(*m);
}

py::object einsumRun(const std::string &specText, const py::args &operands) {
  auto spec = einsum::parseEinsum(specText);
  if (operands.size() != spec.inputs.size())
    throw py::value_error("einsum expects " + std::to_string(spec.inputs.size()) + " operands, got " +
                          std::to_string(operands.size()));
  std::vector<py::array> arrays;
  std::vector<std::vector<std::int64_t>> shapes;
  for (const auto &o : operands) {
    arrays.push_back(py::array::ensure(o));
    if (!arrays.back())
      throw py::type_error("einsum operands must be arrays");
    shapes.emplace_back(arrays.back().shape(), arrays.back().shape() + arrays.back().ndim());
  }
  ir::Type elem = elementTypeOf(arrays.at(0).dtype());
  if (!elem.isFloat())
    throw py::type_error("einsum operands must be float32 or float64");
  auto outShape = einsum::checkShapes(spec, shapes);

  auto registry = driver::defaultRegistry();
  auto m = einsum::buildEinsumModule(registry, spec, fir::FrontendType::concrete(elem.str()), shapes);
  std::vector<interp::RuntimeValue> args;
  for (const auto &a : arrays) {
    if (elementTypeOf(a.dtype()) != elem)
      throw py::type_error("einsum operands must share one dtype");
    args.push_back(interp::RuntimeValue::tensor(toBuffer(a, elem)));
  }
  args.push_back(interp::RuntimeValue::tensor(interp::RuntimeValue::makeBuffer(elem, outShape)));
  return toPython(interp::runFunction(*m, "einsum", args).at(0));
}

py::list verify(const std::string &json) {
  auto registry = driver::defaultRegistry();
  auto m = driver::loadModuleJson(json);
  py::list out;
  for (const auto &d : ir::verifyModule(*m, &registry.dialects()).diagnostics)
    out.append(py::make_tuple(ir::categoryName(d.category), d.opName, d.message));
  return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Frontend IR to MLIR-style IR translation";

  auto base = py::register_exception<Error>(m, "BridgegenError", PyExc_RuntimeError);
  static py::exception<driver::PipelineError> pipelineError(m, "PipelineError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p)
        std::rethrow_exception(p);
    } catch (const driver::PipelineError &e) {
      py::object err = py::reinterpret_borrow<py::object>(pipelineError)(e.what());
      py::setattr(err, "stage", py::str(e.stage()));
      PyErr_SetObject(pipelineError.ptr(), err.ptr());
    }
  });

  m.def("generate", &generate, py::arg("source"), py::arg("entry") = "", py::arg("types") = "",
        py::arg("dialects") = std::vector<std::string>{},
        "Translate FIR source; returns the printed module. `dialects` are extra dialect spec texts.");
  m.def("lower", &lower, py::arg("source"), py::arg("entry") = "", py::arg("types") = "",
        "Entry function after inlining and bool conversion, as FIR text.");
  m.def("run", &run, py::arg("source"), py::arg("inputs"), py::arg("entry") = "", py::arg("types") = "",
        py::arg("launch") = py::none(), py::arg("reverse_threads") = false, py::arg("step_limit") = 10'000'000,
        "Translate and interpret. With `launch` (gx, gy, gz, bx, by, bz) the entry runs as a kernel and the "
        "memref arguments are returned.");
  m.def("einsum_module", &einsumModule, py::arg("spec"), py::arg("elem") = "f32", py::arg("shapes") = py::none(),
        "Printed module of the `einsum(inputs..., output)` wrapper for `spec`.");
  m.def("einsum", &einsumRun, py::arg("spec"), "Evaluate `spec` on float arrays through the generated IR.");
  m.def("verify", &verify, py::arg("module_json"),
        "Verify a JSON module description; returns (category, op, message) tuples.");
}
