#include "bridgegen/interp/Interpreter.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

namespace bridgegen::interp {

namespace {

struct Env {
  const Env *parent = nullptr;
  std::unordered_map<std::uint32_t, RuntimeValue> values;

  const RuntimeValue &get(ir::Value v) const {
    for (const Env *e = this; e; e = e->parent)
      if (auto it = e->values.find(v.id()); it != e->values.end())
        return it->second;
    throw InterpError("value %" + std::to_string(v.id()) + " used before definition");
  }
  void set(ir::Value v, RuntimeValue r) { values[v.id()] = std::move(r); }
};

struct ThreadCoord {
  std::array<std::int64_t, 3> thread{0, 0, 0};
  std::array<std::int64_t, 3> block{0, 0, 0};
};

unsigned dimIndex(const ir::Operation &op) {
  const ir::Attribute *a = op.attr("dimension");
  if (!a || !a->isString())
    throw InterpError(op.name() + " has no dimension attribute");
  if (a->text() == "x")
    return 0;
  if (a->text() == "y")
    return 1;
  if (a->text() == "z")
    return 2;
  throw InterpError(op.name() + " has unknown dimension '" + a->text() + "'");
}

const ir::Operation &findFunction(const ir::Module &module, std::string_view symbol) {
  const ir::Operation *op = module.lookupSymbol(symbol);
  if (!op || op->name() != "func.func")
    throw InterpError("no function @" + std::string(symbol));
  return *op;
}

class Machine {
public:
  Machine(const ir::Module &module, const Options &options) : module_(module), options_(options) {}

  void setLaunch(const LaunchConfig *launch) { launch_ = launch; }
  void setCoord(const ThreadCoord &c) { coord_ = c; }

  std::vector<RuntimeValue> call(const ir::Operation &func, const std::vector<RuntimeValue> &args) {
    const ir::Attribute *fty = func.attr("function_type");
    if (!fty || !fty->isType() || !fty->typeValue().isFunction())
      throw InterpError("function without a function_type");
    const ir::Type &ft = fty->typeValue();
    const std::string name = func.attr("sym_name") ? func.attr("sym_name")->text() : "?";
    if (args.size() != ft.inputs().size())
      throw InterpError("@" + name + " takes " + std::to_string(ft.inputs().size()) + " arguments, got " +
                        std::to_string(args.size()));
    for (std::size_t i = 0; i < args.size(); ++i)
      if (!args[i].conformsTo(ft.inputs()[i]))
        throw InterpError("argument " + std::to_string(i) + " of @" + name + " has type " + args[i].type().str() +
                          ", expected " + ft.inputs()[i].str());
    if (func.numRegions() != 1 || func.region(0).empty())
      throw InterpError("@" + name + " has no body");
    return runRegion(func.region(0), args, nullptr);
  }

private:
  void step() {
    if (++steps_ > options_.stepLimit)
      throw InterpError("step limit of " + std::to_string(options_.stepLimit) + " exceeded");
  }

  std::vector<RuntimeValue> runRegion(const ir::Region &region, const std::vector<RuntimeValue> &args,
                                      const Env *parent) {
    Env env;
    env.parent = parent;
    const ir::Block *block = &region.entry();
    std::vector<RuntimeValue> blockArgs = args;
    while (true) {
      if (blockArgs.size() != block->numArguments())
        throw InterpError("block ^" + std::to_string(block->id()) + " expects " +
                          std::to_string(block->numArguments()) + " arguments, got " +
                          std::to_string(blockArgs.size()));
      for (std::size_t i = 0; i < blockArgs.size(); ++i)
        env.set(block->argument(i), blockArgs[i]);
      const ir::Block *next = nullptr;
      for (std::size_t i = 0; i < block->size() && !next; ++i) {
        const ir::Operation &op = block->op(i);
        step();
        const std::string &n = op.name();
        if (n == "func.return" || n == "linalg.yield") {
          std::vector<RuntimeValue> out;
          for (auto v : op.operands())
            out.push_back(env.get(v));
          return out;
        }
        if (n == "cf.br" || n == "cf.cond_br") {
          std::size_t which = 0;
          if (n == "cf.cond_br")
            which = env.get(op.operand(0)).intValue() ? 0 : 1;
          if (which >= op.successors().size())
            throw InterpError(n + " without enough successors");
          const ir::Successor &s = op.successors()[which];
          blockArgs.clear();
          for (auto v : s.args)
            blockArgs.push_back(env.get(v));
          next = s.block;
          break;
        }
        exec(op, env);
      }
      if (!next)
        throw InterpError("block ^" + std::to_string(block->id()) + " ended without a terminator");
      block = next;
    }
  }

  static RuntimeValue floatBinary(const std::string &n, const RuntimeValue &a, const RuntimeValue &b) {
    if (a.kind() != b.kind() || !a.isFloat())
      throw InterpError(n + " on mismatched or non-float operands");
    if (a.kind() == RuntimeValue::Kind::F32) {
      float x = a.asF32(), y = b.asF32(), r;
      if (n == "arith.addf")
        r = x + y;
      else if (n == "arith.subf")
        r = x - y;
      else if (n == "arith.mulf")
        r = x * y;
      else
        r = x / y;
      return RuntimeValue::f32(r);
    }
    double x = a.asF64(), y = b.asF64(), r;
    if (n == "arith.addf")
      r = x + y;
    else if (n == "arith.subf")
      r = x - y;
    else if (n == "arith.mulf")
      r = x * y;
    else
      r = x / y;
    return RuntimeValue::f64(r);
  }

  static RuntimeValue intBinary(const std::string &n, const RuntimeValue &a, const RuntimeValue &b,
                                const ir::Type &type) {
    auto x = static_cast<std::uint64_t>(a.intValue());
    auto y = static_cast<std::uint64_t>(b.intValue());
    std::uint64_t r = n == "arith.addi" ? x + y : n == "arith.subi" ? x - y : x * y;
    return RuntimeValue::scalarInt(type, static_cast<std::int64_t>(r));
  }

  static bool compare(const std::string &pred, std::int64_t x, std::int64_t y) {
    if (pred == "eq")
      return x == y;
    if (pred == "ne")
      return x != y;
    if (pred == "slt")
      return x < y;
    if (pred == "sle")
      return x <= y;
    if (pred == "sgt")
      return x > y;
    if (pred == "sge")
      return x >= y;
    throw InterpError("unknown cmpi predicate '" + pred + "'");
  }

  std::size_t flatIndex(const ir::Operation &op, const RuntimeValue &buf, const Env &env, std::size_t firstIndex) {
    const auto &dims = buf.buffer()->dims;
    const std::size_t rank = dims.size();
    if (op.numOperands() - firstIndex != rank)
      throw InterpError(op.name() + " needs " + std::to_string(rank) + " indices");
    std::size_t flat = 0;
    std::string coords;
    bool oob = false;
    for (std::size_t d = 0; d < rank; ++d) {
      std::int64_t i = env.get(op.operand(firstIndex + d)).intValue();
      coords += (d ? ", " : "") + std::to_string(i);
      if (i < 0 || i >= dims[d])
        oob = true;
      flat = flat * static_cast<std::size_t>(dims[d]) + static_cast<std::size_t>(i);
    }
    if (oob) {
      std::string shape;
      for (std::size_t d = 0; d < rank; ++d)
        shape += (d ? "x" : "") + std::to_string(dims[d]);
      std::string msg = "out-of-bounds " + op.name() + " at index [" + coords + "] of a buffer of shape " + shape;
      if (launch_)
        msg += " in block (" + std::to_string(coord_.block[0]) + ", " + std::to_string(coord_.block[1]) + ", " +
               std::to_string(coord_.block[2]) + "), thread (" + std::to_string(coord_.thread[0]) + ", " +
               std::to_string(coord_.thread[1]) + ", " + std::to_string(coord_.thread[2]) + ")";
      throw InterpError(msg);
    }
    return flat;
  }

  void exec(const ir::Operation &op, Env &env) {
    const std::string &n = op.name();
    auto in = [&](std::size_t i) -> const RuntimeValue & { return env.get(op.operand(i)); };
    auto out = [&](RuntimeValue v) { env.set(op.result(0), std::move(v)); };

    if (n == "arith.constant") {
      const ir::Attribute *a = op.attr("value");
      if (!a || !a->isTyped())
        throw InterpError("arith.constant without a typed value");
      out(a->isFloat() ? RuntimeValue::scalar(a->typeValue(), a->floatValue())
                       : RuntimeValue::scalarInt(a->typeValue(), a->intValue()));
    } else if (n == "arith.addf" || n == "arith.subf" || n == "arith.mulf" || n == "arith.divf") {
      out(floatBinary(n, in(0), in(1)));
    } else if (n == "arith.negf") {
      const RuntimeValue &a = in(0);
      out(a.kind() == RuntimeValue::Kind::F32 ? RuntimeValue::f32(-a.asF32()) : RuntimeValue::f64(-a.asF64()));
    } else if (n == "math.exp") {
      const RuntimeValue &a = in(0);
      out(a.kind() == RuntimeValue::Kind::F32 ? RuntimeValue::f32(std::exp(a.asF32()))
                                              : RuntimeValue::f64(std::exp(a.asF64())));
    } else if (n == "arith.addi" || n == "arith.subi" || n == "arith.muli") {
      out(intBinary(n, in(0), in(1), op.result(0).type()));
    } else if (n == "arith.cmpi") {
      const ir::Attribute *p = op.attr("predicate");
      if (!p || !p->isString())
        throw InterpError("arith.cmpi without a predicate");
      out(RuntimeValue::integer(1, compare(p->text(), in(0).intValue(), in(1).intValue()) ? 1 : 0));
    } else if (n == "arith.index_cast") {
      out(RuntimeValue::scalarInt(op.result(0).type(), in(0).intValue()));
    } else if (n == "func.call") {
      const ir::Attribute *callee = op.attr("callee");
      if (!callee)
        throw InterpError("func.call without a callee");
      std::vector<RuntimeValue> args;
      for (auto v : op.operands())
        args.push_back(env.get(v));
      auto results = call(findFunction(module_, callee->text()), args);
      if (results.size() != op.numResults())
        throw InterpError("@" + callee->text() + " returned " + std::to_string(results.size()) + " values");
      for (std::size_t i = 0; i < results.size(); ++i)
        env.set(op.result(i), results[i]);
    } else if (n == "linalg.generic") {
      execGeneric(op, env);
    } else if (n == "gpu.thread_id" || n == "gpu.block_id" || n == "gpu.block_dim") {
      if (!launch_)
        throw InterpError("missing launch config for " + n);
      unsigned d = dimIndex(op);
      std::int64_t v = n == "gpu.thread_id" ? coord_.thread[d] : n == "gpu.block_id" ? coord_.block[d] : launch_->block[d];
      out(RuntimeValue::index(v));
    } else if (n == "memref.load") {
      const RuntimeValue &buf = in(0);
      if (buf.kind() != RuntimeValue::Kind::MemRef)
        throw InterpError("memref.load from a non-memref");
      out(buf.element(flatIndex(op, buf, env, 1)));
    } else if (n == "memref.store") {
      const RuntimeValue &buf = in(1);
      if (buf.kind() != RuntimeValue::Kind::MemRef)
        throw InterpError("memref.store into a non-memref");
      buf.setElement(flatIndex(op, buf, env, 2), in(0));
    } else {
      throw InterpError("unsupported operation " + n);
    }
  }

  void execGeneric(const ir::Operation &op, Env &env) {
    const ir::Attribute *mapsAttr = op.attr("indexing_maps");
    if (!mapsAttr || !mapsAttr->isArray() || mapsAttr->elements().size() != op.numOperands())
      throw InterpError("linalg.generic needs one indexing map per operand");
    std::vector<ir::IndexMap> maps;
    for (const auto &a : mapsAttr->elements()) {
      if (!a.isIndexMap())
        throw InterpError("linalg.generic indexing_maps must hold index maps");
      maps.push_back(a.indexMapValue());
    }
    const unsigned numAxes = maps.empty() ? 0 : maps[0].numDims;
    std::vector<RuntimeValue> operands;
    for (auto v : op.operands())
      operands.push_back(env.get(v));
    if (operands.empty())
      throw InterpError("linalg.generic without operands");

    std::vector<std::int64_t> extent(numAxes, -1);
    for (std::size_t k = 0; k < operands.size(); ++k) {
      if (operands[k].isScalar())
        throw InterpError("linalg.generic operand " + std::to_string(k) + " is not shaped");
      const auto &dims = operands[k].buffer()->dims;
      if (maps[k].numDims != numAxes || maps[k].results.size() != dims.size())
        throw InterpError("indexing map " + maps[k].str() + " does not fit operand " + std::to_string(k));
      for (std::size_t d = 0; d < dims.size(); ++d) {
        unsigned axis = maps[k].results[d];
        if (extent[axis] == -1)
          extent[axis] = dims[d];
        else if (extent[axis] != dims[d])
          throw InterpError("inconsistent extents for d" + std::to_string(axis) + ": " +
                            std::to_string(extent[axis]) + " and " + std::to_string(dims[d]));
      }
    }
    for (unsigned a = 0; a < numAxes; ++a)
      if (extent[a] == -1)
        throw InterpError("cannot infer the extent of d" + std::to_string(a));

    // Tensors are values: accumulate into a copy of the output operand.
    RuntimeValue &output = operands.back();
    if (output.kind() == RuntimeValue::Kind::Tensor)
      output = RuntimeValue::tensor(std::make_shared<Buffer>(*output.buffer()));

    std::vector<std::vector<std::size_t>> strides(operands.size());
    for (std::size_t k = 0; k < operands.size(); ++k) {
      const auto &dims = operands[k].buffer()->dims;
      strides[k].assign(dims.size(), 1);
      for (std::size_t d = dims.size(); d-- > 1;)
        strides[k][d - 1] = strides[k][d] * static_cast<std::size_t>(dims[d]);
    }

    bool empty = false;
    for (auto e : extent)
      empty |= e == 0;
    std::vector<std::int64_t> point(numAxes, 0);
    const ir::Region &body = op.region(0);
    while (!empty) {
      std::vector<RuntimeValue> args;
      std::size_t outFlat = 0;
      for (std::size_t k = 0; k < operands.size(); ++k) {
        std::size_t flat = 0;
        for (std::size_t d = 0; d < maps[k].results.size(); ++d)
          flat += static_cast<std::size_t>(point[maps[k].results[d]]) * strides[k][d];
        args.push_back(operands[k].element(flat));
        outFlat = flat;
      }
      auto yielded = runRegion(body, args, &env);
      if (yielded.size() != 1)
        throw InterpError("linalg.generic body must yield one value");
      output.setElement(outFlat, yielded[0]);

      // Odometer over the axes, last axis fastest.
      std::size_t a = numAxes;
      while (a > 0) {
        --a;
        if (++point[a] < extent[a])
          break;
        point[a] = 0;
        if (a == 0)
          empty = true;
      }
      if (numAxes == 0)
        empty = true;
    }
    if (op.numResults() > 0)
      env.set(op.result(0), output);
  }

  const ir::Module &module_;
  const Options &options_;
  std::uint64_t steps_ = 0;
  const LaunchConfig *launch_ = nullptr;
  ThreadCoord coord_;
};

bool regionUsesGpu(const ir::Region &region, const ir::Module &module, std::set<std::string> &visited);

bool opUsesGpu(const ir::Operation &op, const ir::Module &module, std::set<std::string> &visited) {
  const std::string &n = op.name();
  if (n == "gpu.thread_id" || n == "gpu.block_id" || n == "gpu.block_dim")
    return true;
  if (n == "func.call") {
    const ir::Attribute *callee = op.attr("callee");
    if (callee && visited.insert(callee->text()).second)
      if (const ir::Operation *f = module.lookupSymbol(callee->text()))
        for (std::size_t r = 0; r < f->numRegions(); ++r)
          if (regionUsesGpu(f->region(r), module, visited))
            return true;
  }
  for (std::size_t r = 0; r < op.numRegions(); ++r)
    if (regionUsesGpu(op.region(r), module, visited))
      return true;
  return false;
}

bool regionUsesGpu(const ir::Region &region, const ir::Module &module, std::set<std::string> &visited) {
  for (std::size_t b = 0; b < region.size(); ++b) {
    const ir::Block &block = region.block(b);
    for (std::size_t i = 0; i < block.size(); ++i)
      if (opUsesGpu(block.op(i), module, visited))
        return true;
  }
  return false;
}

} // namespace

std::vector<RuntimeValue> runFunction(const ir::Module &module, std::string_view symbol,
                                      const std::vector<RuntimeValue> &inputs, const Options &options) {
  Machine m(module, options);
  return m.call(findFunction(module, symbol), inputs);
}

std::vector<RuntimeValue> runKernel(const ir::Module &module, std::string_view symbol, const LaunchConfig &launch,
                                    const std::vector<RuntimeValue> &inputs, const Options &options) {
  for (int d = 0; d < 3; ++d)
    if (launch.grid[d] < 1 || launch.block[d] < 1)
      throw InterpError("launch extents must be at least 1");
  const ir::Operation &func = findFunction(module, symbol);
  std::vector<ThreadCoord> order;
  for (std::int64_t bz = 0; bz < launch.grid[2]; ++bz)
    for (std::int64_t by = 0; by < launch.grid[1]; ++by)
      for (std::int64_t bx = 0; bx < launch.grid[0]; ++bx)
        for (std::int64_t tz = 0; tz < launch.block[2]; ++tz)
          for (std::int64_t ty = 0; ty < launch.block[1]; ++ty)
            for (std::int64_t tx = 0; tx < launch.block[0]; ++tx)
              order.push_back({{tx, ty, tz}, {bx, by, bz}});
  if (options.reverseThreadOrder)
    std::reverse(order.begin(), order.end());

  Machine m(module, options);
  m.setLaunch(&launch);
  for (const auto &c : order) {
    m.setCoord(c);
    m.call(func, inputs);
  }
  return inputs;
}

bool usesGpuIds(const ir::Module &module, std::string_view symbol) {
  const ir::Operation &func = findFunction(module, symbol);
  std::set<std::string> visited{std::string(symbol)};
  return opUsesGpu(func, module, visited);
}

} // namespace bridgegen::interp
