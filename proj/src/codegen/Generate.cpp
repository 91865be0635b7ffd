#include "bridgegen/codegen/Generate.hpp"
#include "bridgegen/fir/Passes.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace bridgegen::codegen {

//===----------------------------------------------------------------------===//
// BuilderContext
//===----------------------------------------------------------------------===//

BuilderContext::BuilderContext(ir::Module &module, const IntrinsicRegistry &registry,
                               std::shared_ptr<ConstantPool> pool, const fir::FirFunction *function)
    : module_(module), registry_(registry), pool_(std::move(pool)), function_(function) {
  if (!pool_)
    pool_ = std::make_shared<ConstantPool>();
}

void BuilderContext::setCurrentBlock(ir::Block *block) {
  current_ = block;
  if (block)
    module_.setInsertionPointToEnd(*block);
}

ir::Operation &BuilderContext::build(std::string_view name, dialects::OpArgs args) {
  if (!current_)
    throw CodegenError("no insertion block for '" + std::string(name) + "'");
  module_.setInsertionPointToEnd(*current_);
  return dialects::buildOp(registry_.dialects(), module_, name, std::move(args));
}

ir::Value BuilderContext::build1(std::string_view name, ir::ValueList operands, ir::AttrMap attributes) {
  dialects::OpArgs args;
  args.operands = std::move(operands);
  args.attributes = std::move(attributes);
  return build(name, std::move(args)).result(0);
}

ir::Block *BuilderContext::blockFor(unsigned firBlock) const {
  auto it = blocks_.find(firBlock);
  if (it == blocks_.end())
    throw CodegenError("FIR block #" + std::to_string(firBlock) + " has no IR block");
  return it->second;
}

const ir::ValueList &BuilderContext::valuesOf(const fir::FirArg &arg) const {
  if (arg.isParam()) {
    if (arg.ref >= params_.size())
      throw CodegenError("parameter " + std::to_string(arg.ref) + " is not bound");
    return params_[arg.ref];
  }
  if (arg.isSsa()) {
    auto it = bindings_.find(arg.ref);
    if (it == bindings_.end())
      throw CodegenError("%" + std::to_string(arg.ref) + " is used before it is bound");
    return it->second;
  }
  throw CodegenError("literal arguments have no bound values");
}

namespace {

constexpr double kF32Exact = 16777216.0;          // 2^24
constexpr double kF64Exact = 9007199254740992.0;  // 2^53

std::string literalText(const fir::FirArg &a) {
  fir::FirFunction empty;
  return fir::printArg(empty, a);
}

ir::Attribute literalAttribute(const fir::FirArg &lit, const ir::Type &t, const FrontendType &ft) {
  auto fail = [&](const std::string &why) -> ir::Attribute {
    throw CodegenError("literal " + literalText(lit) + " cannot be represented as " + ft.str() + ": " + why);
  };
  if (t.isFloat()) {
    const double limit = t.width() == 32 ? kF32Exact : kF64Exact;
    switch (lit.kind) {
    case fir::FirArg::Kind::Int:
      if (std::fabs(static_cast<double>(lit.intValue)) > limit)
        return fail("integer magnitude exceeds the exactly representable range");
      return ir::Attribute::floatAttr(static_cast<double>(lit.intValue), t);
    case fir::FirArg::Kind::Float:
      if (!std::isfinite(lit.floatValue))
        return ir::Attribute::floatAttr(lit.floatValue, t);
      if (t.width() == 32 && std::fabs(lit.floatValue) > FLT_MAX)
        return fail("out of f32 range");
      return ir::Attribute::floatAttr(lit.floatValue, t);
    default:
      return fail("booleans do not convert to floats");
    }
  }
  if (t.isIntegerLike()) {
    std::int64_t v = 0;
    switch (lit.kind) {
    case fir::FirArg::Kind::Bool:
      if (!(t.isInteger() && t.width() == 1))
        return fail("booleans convert only to i1");
      return ir::Attribute::intAttr(lit.boolValue ? 1 : 0, t);
    case fir::FirArg::Kind::Float:
      if (lit.floatValue != std::trunc(lit.floatValue) || std::fabs(lit.floatValue) > 9.2e18)
        return fail("not an integral value");
      v = static_cast<std::int64_t>(lit.floatValue);
      break;
    case fir::FirArg::Kind::Int:
      v = lit.intValue;
      break;
    default:
      return fail("not a literal");
    }
    if (t.isInteger() && t.width() < 64) {
      const unsigned w = t.width();
      const std::int64_t lo = w == 1 ? 0 : -(std::int64_t(1) << (w - 1));
      const std::int64_t hi = w == 1 ? 1 : (std::int64_t(1) << (w - 1)) - 1;
      if (v < lo || v > hi)
        return fail("out of range");
    }
    return ir::Attribute::intAttr(v, t);
  }
  return fail("not a scalar type");
}

} // namespace

ir::Value BuilderContext::materializeConstant(const fir::FirArg &literal, const FrontendType &type) {
  if (!literal.isLiteral())
    throw CodegenError("materializeConstant needs a literal");
  auto types = registry_.mapType(type);
  if (types.size() != 1 || !types[0].isScalar())
    throw CodegenError("literal " + literalText(literal) + " cannot be materialized as " + type.str());
  return materializeConstant(literalAttribute(literal, types[0], type));
}

ir::Value BuilderContext::materializeConstant(const ir::Attribute &value) {
  if (!value.isTyped())
    throw CodegenError("constants need a typed attribute, got " + value.str());
  auto key = std::make_pair(value.typeValue().str(), value.valueStr());
  if (auto it = pool_->cache.find(key); it != pool_->cache.end())
    return it->second;
  if (!pool_->block)
    throw CodegenError("no block for constants");
  module_.setInsertionPoint(*pool_->block, pool_->insertIndex);
  dialects::OpArgs args;
  args.attributes["value"] = value;
  args.resultTypes = {value.typeValue()};
  ir::Operation &op = dialects::buildOp(registry_.dialects(), module_, "arith.constant", std::move(args));
  ++pool_->insertIndex;
  if (current_)
    module_.setInsertionPointToEnd(*current_);
  ir::Value v = op.result(0);
  pool_->cache.emplace(std::move(key), v);
  return v;
}

//===----------------------------------------------------------------------===//
// Translator
//===----------------------------------------------------------------------===//

namespace {

std::string typesStr(const std::vector<ir::Type> &types) {
  std::string s = "(";
  for (std::size_t i = 0; i < types.size(); ++i)
    s += (i ? ", " : "") + types[i].str();
  return s + ")";
}

std::vector<ir::Type> typesOf(const ir::ValueList &values) {
  std::vector<ir::Type> out;
  for (auto v : values)
    out.push_back(v.type());
  return out;
}

class Translator {
public:
  Translator(BuilderContext &ctx, const fir::FirFunction &fn, ir::Region &region,
             IntrinsicRegistry::ReturnHook returnHook)
      : ctx_(ctx), reg_(ctx.registry()), fn_(fn), region_(region), returnHook_(std::move(returnHook)) {}

  /// Entry block; valid after createBlocks.
  ir::Block *entry() const { return entryBlock_; }
  const std::optional<std::vector<ir::Type>> &returnTypes() const { return returnTypes_; }

  void createBlocks() {
    if (!region_.empty())
      throw CodegenError("target region is not empty");
    if (fn_.blocks.empty())
      throw CodegenError("function '" + fn_.name + "' has no blocks");
    reachable_ = fir::reachableBlocks(fn_);
    auto preds = fir::predecessors(fn_);
    preds_.assign(fn_.numBlocks(), {});
    for (unsigned b = 1; b <= fn_.numBlocks(); ++b)
      for (unsigned p : preds[b - 1])
        if (reachable_[p - 1])
          preds_[b - 1].push_back(p);
    if (!preds_[0].empty())
      throw CodegenError("entry block #1 of '" + fn_.name + "' is a branch target, which the IR entry block cannot be");

    std::vector<ir::Type> entryTypes;
    for (const auto &t : fn_.paramTypes) {
      auto mapped = reg_.mapType(t);
      ctx_.paramBindings().emplace_back();
      entryTypes.insert(entryTypes.end(), mapped.begin(), mapped.end());
    }
    for (unsigned b = 1; b <= fn_.numBlocks(); ++b) {
      if (!reachable_[b - 1])
        continue;
      std::vector<ir::Type> argTypes = b == 1 ? entryTypes : std::vector<ir::Type>{};
      auto &pending = ctx_.pendingPhis()[b];
      for (const auto &stmt : fn_.block(b).statements) {
        auto *phi = stmt.as<fir::Phi>();
        if (!phi)
          break;
        if (b == 1)
          throw CodegenError("phi %" + std::to_string(stmt.id) + " in the entry block");
        auto mapped = reg_.mapType(phi->type);
        pending.push_back({stmt.id, phi, argTypes.size(), mapped.size()});
        argTypes.insert(argTypes.end(), mapped.begin(), mapped.end());
      }
      ir::Block &blk = ctx_.module().appendBlock(region_, argTypes);
      ctx_.blocks()[b] = &blk;
      if (b == 1)
        entryBlock_ = &blk;
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < fn_.paramTypes.size(); ++i) {
      std::size_t n = reg_.mapType(fn_.paramTypes[i]).size();
      for (std::size_t j = 0; j < n; ++j)
        ctx_.paramBindings()[i].push_back(entryBlock_->argument(k++));
    }
  }

  void translate() {
    for (unsigned b = 1; b <= fn_.numBlocks(); ++b) {
      if (!reachable_[b - 1])
        continue;
      ctx_.setCurrentBlock(ctx_.blockFor(b));
      bool terminated = false;
      for (const auto &stmt : fn_.block(b).statements) {
        try {
          terminated = translateStatement(b, stmt);
        } catch (const NoMethodError &e) {
          throw NoMethodError(where(b, stmt) + e.what());
        } catch (const AmbiguousError &e) {
          throw AmbiguousError(where(b, stmt) + e.what());
        } catch (const Error &e) {
          throw CodegenError(where(b, stmt) + e.what());
        }
        if (terminated)
          break;
      }
      if (!terminated) {
        if (b == fn_.numBlocks())
          throw CodegenError("block #" + std::to_string(b) + " of '" + fn_.name + "' falls off the end");
        reg_.gotoHook()(ctx_, ctx_.blockFor(b + 1), edgeArgs(b, b + 1));
      }
    }
  }

private:
  std::string where(unsigned b, const fir::FirStatement &stmt) const {
    std::string s = fn_.name + ", block #" + std::to_string(b);
    if (stmt.id)
      s += ", %" + std::to_string(stmt.id);
    return s + ": ";
  }

  ir::ValueList valuesFor(const fir::FirArg &arg, const FrontendType &literalType) {
    if (arg.isLiteral())
      return {ctx_.materializeConstant(arg, literalType)};
    return ctx_.valuesOf(arg);
  }

  FrontendType argType(const fir::FirArg &arg) const { return fir::typeOf(fn_, arg); }

  bool translateStatement(unsigned b, const fir::FirStatement &stmt) {
    if (auto *inv = stmt.as<fir::Invoke>()) {
      ctx_.bindings()[stmt.id] = translateInvoke(*inv);
      return false;
    }
    if (stmt.is<fir::Phi>()) {
      for (const auto &p : ctx_.pendingPhis()[b])
        if (p.id == stmt.id) {
          ir::Block *blk = ctx_.blockFor(b);
          ir::ValueList vals;
          for (std::size_t i = 0; i < p.numArgs; ++i)
            vals.push_back(blk->argument(p.firstArg + i));
          ctx_.bindings()[stmt.id] = vals;
          return false;
        }
      throw CodegenError("phi %" + std::to_string(stmt.id) + " is not at the start of its block");
    }
    if (stmt.is<fir::Nothing>())
      return false;
    if (auto *g = stmt.as<fir::Goto>()) {
      reg_.gotoHook()(ctx_, ctx_.blockFor(g->target), edgeArgs(b, g->target));
      return true;
    }
    if (auto *g = stmt.as<fir::GotoIfNot>()) {
      if (b == fn_.numBlocks())
        throw CodegenError("conditional branch in the last block has no fall-through block");
      ir::ValueList cond = valuesFor(g->cond, fir::boolType());
      if (cond.size() != 1 || !(cond[0].type() == ir::Type::integer(1)))
        throw CodegenError("branch condition of type " + argType(g->cond).str() + " is not a single i1 value");
      reg_.gotoIfNotHook()(ctx_, cond[0], ctx_.blockFor(b + 1), edgeArgs(b, b + 1), ctx_.blockFor(g->target),
                           edgeArgs(b, g->target));
      return true;
    }
    if (auto *r = stmt.as<fir::Return>()) {
      ir::ValueList vals;
      if (r->value)
        vals = valuesFor(*r->value, argType(*r->value));
      auto types = typesOf(vals);
      if (returnTypes_ && *returnTypes_ != types)
        throw CodegenError("return types " + typesStr(types) + " differ from earlier return " +
                           typesStr(*returnTypes_));
      returnTypes_ = types;
      returnHook_(ctx_, vals);
      return true;
    }
    throw CodegenError("unknown statement");
  }

  ir::ValueList translateInvoke(const fir::Invoke &inv) {
    if (inv.target == fir::kBoolConversion) {
      if (inv.args.size() != 1)
        throw CodegenError(std::string(fir::kBoolConversion) + " takes one argument");
      FrontendType t = argType(inv.args[0]);
      ir::ValueList vals = valuesFor(inv.args[0], t);
      if (vals.size() == 1 && vals[0].type() == ir::Type::integer(1))
        return vals;
      const auto *conv = reg_.boolConversion(t);
      if (!conv)
        throw CodegenError("no bool conversion registered for condition type " + t.str());
      ir::Value v = (*conv)(ctx_, vals);
      if (!(v.type() == ir::Type::integer(1)))
        throw CodegenError("bool conversion for " + t.str() + " produced " + v.type().str() + ", expected i1");
      return {v};
    }

    FrontendTypes types;
    bool anyLiteral = false;
    for (const auto &a : inv.args) {
      types.push_back(argType(a));
      anyLiteral |= a.isLiteral();
    }
    Resolution res = reg_.lookup(inv.target, types);
    if (res.status == Resolution::Status::NoMethod && anyLiteral) {
      // Promote literals to the type of each non-literal argument in turn.
      FrontendTypes tried;
      for (std::size_t i = 0; i < inv.args.size() && !res.found(); ++i) {
        if (inv.args[i].isLiteral() || std::find(tried.begin(), tried.end(), types[i]) != tried.end())
          continue;
        tried.push_back(types[i]);
        FrontendTypes promoted = types;
        for (std::size_t j = 0; j < inv.args.size(); ++j)
          if (inv.args[j].isLiteral())
            promoted[j] = types[i];
        Resolution r = reg_.lookup(inv.target, promoted);
        if (r.found()) {
          res = r;
          types = promoted;
        }
      }
    }
    if (!res.found())
      reg_.resolve(inv.target, types); // throws the matching error

    IntrinsicCall call{ctx_, {}, types, inv.type};
    for (std::size_t i = 0; i < inv.args.size(); ++i)
      call.args.push_back(valuesFor(inv.args[i], types[i]));
    ir::ValueList results = res.method->builder(call);

    auto expected = reg_.mapType(inv.type);
    if (typesOf(results) != expected)
      throw CodegenError("intrinsic " + res.method->signature.str() + " produced " + typesStr(typesOf(results)) +
                         " for result type " + inv.type.str() + ", expected " + typesStr(expected));
    return results;
  }

  ir::ValueList edgeArgs(unsigned from, unsigned to) {
    ir::ValueList out;
    for (const auto &p : ctx_.pendingPhis()[to]) {
      const fir::PhiIncoming *in = nullptr;
      for (const auto &candidate : p.phi->incomings)
        if (candidate.pred == from)
          in = &candidate;
      if (!in)
        throw CodegenError("phi %" + std::to_string(p.id) + " in block #" + std::to_string(to) +
                           " has no incoming value from #" + std::to_string(from));
      ir::ValueList vals = valuesFor(in->value, p.phi->type);
      if (vals.size() != p.numArgs)
        throw CodegenError("incoming value for phi %" + std::to_string(p.id) + " unpacks to " +
                           std::to_string(vals.size()) + " values, expected " + std::to_string(p.numArgs));
      out.insert(out.end(), vals.begin(), vals.end());
    }
    return out;
  }

  BuilderContext &ctx_;
  const IntrinsicRegistry &reg_;
  const fir::FirFunction &fn_;
  ir::Region &region_;
  IntrinsicRegistry::ReturnHook returnHook_;
  std::vector<bool> reachable_;
  std::vector<std::vector<unsigned>> preds_;
  ir::Block *entryBlock_ = nullptr;
  std::optional<std::vector<ir::Type>> returnTypes_;
};

fir::FirFunction specialize(const IntrinsicRegistry &registry, const fir::FirFunction &fn,
                            const FrontendTypes &argTypes) {
  if (argTypes.size() != fn.paramTypes.size())
    throw CodegenError("'" + fn.name + "' takes " + std::to_string(fn.paramTypes.size()) + " arguments, got " +
                       std::to_string(argTypes.size()) + " argument types");
  for (std::size_t i = 0; i < argTypes.size(); ++i) {
    if (!argTypes[i].isConcrete())
      throw CodegenError("argument type " + argTypes[i].str() + " is not concrete");
    if (!registry.lattice().isSubtype(argTypes[i], fn.paramTypes[i]))
      throw CodegenError("argument type " + argTypes[i].str() + " does not match parameter " + std::to_string(i + 1) +
                         " of type " + fn.paramTypes[i].str());
  }
  fir::FirFunction out = fn;
  out.paramTypes = argTypes;
  return out;
}

} // namespace

Translation generateDetailed(const IntrinsicRegistry &registry, const fir::FirFunction &fn,
                             const FrontendTypes &argTypes) {
  fir::FirFunction spec = specialize(registry, fn, argTypes);
  Translation out;
  out.module = ir::Module::create();
  ir::Module &module = *out.module;

  std::vector<ir::Type> inputs;
  for (const auto &t : spec.paramTypes) {
    auto mapped = registry.mapType(t);
    inputs.insert(inputs.end(), mapped.begin(), mapped.end());
  }
  module.setInsertionPointToEnd(module.topBlock());
  dialects::OpArgs args;
  args.attributes["sym_name"] = ir::Attribute::string(spec.name);
  args.attributes["function_type"] = ir::Attribute::type(ir::Type::function(inputs, {}));
  ir::Operation &func = dialects::buildOp(registry.dialects(), module, "func.func", std::move(args));

  auto pool = std::make_shared<ConstantPool>();
  BuilderContext ctx(module, registry, pool, &spec);
  Translator tr(ctx, spec, func.region(0), registry.returnHook());
  tr.createBlocks();
  pool->block = tr.entry();
  tr.translate();

  std::vector<ir::Type> results = tr.returnTypes().value_or(std::vector<ir::Type>{});
  func.setAttr("function_type", ir::Attribute::type(ir::Type::function(inputs, results)));
  out.function = &func;
  out.blocks = ctx.blocks();
  out.values = ctx.bindings();
  return out;
}

ir::ModulePtr generate(const IntrinsicRegistry &registry, const fir::FirFunction &fn, const FrontendTypes &argTypes) {
  return generateDetailed(registry, fn, argTypes).module;
}

void generateRegion(BuilderContext &parent, ir::Region &region, const fir::FirFunction &fn,
                    const FrontendTypes &argTypes, const IntrinsicRegistry::ReturnHook &returnHook) {
  const IntrinsicRegistry &registry = parent.registry();
  fir::FirFunction spec = specialize(registry, fn, argTypes);
  ir::Block *resume = parent.currentBlock();
  BuilderContext ctx(parent.module(), registry, parent.constantPool(), &spec);
  Translator tr(ctx, spec, region, returnHook ? returnHook : registry.returnHook());
  tr.createBlocks();
  if (!ctx.constantPool()->block)
    ctx.constantPool()->block = tr.entry();
  tr.translate();
  parent.setCurrentBlock(resume);
}

} // namespace bridgegen::codegen
