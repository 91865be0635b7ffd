#include "bridgegen/codegen/Intrinsics.hpp"
#include "bridgegen/codegen/Generate.hpp"

namespace bridgegen::codegen {

std::string IntrinsicSignature::str() const { return name + "(" + fir::join(params) + ")"; }

ir::Value IntrinsicCall::arg(std::size_t i) const {
  if (i >= args.size())
    throw CodegenError("intrinsic argument " + std::to_string(i) + " out of range");
  if (args[i].size() != 1)
    throw CodegenError("intrinsic argument " + std::to_string(i) + " unpacks to " + std::to_string(args[i].size()) +
                       " values, expected one");
  return args[i][0];
}

namespace {

std::vector<ir::Type> mapShaped(const FrontendType &t, const IntrinsicRegistry &reg, bool tensor) {
  const auto &p = t.params();
  if (p.size() != 2 || p[0].isIntParam() || !p[1].isIntParam() || p[1].intValue() < 0)
    throw CodegenError("expected " + t.name() + "{T, rank}, got " + t.str());
  auto elem = reg.mapType(p[0]);
  if (elem.size() != 1 || !elem[0].isScalar())
    throw CodegenError("element type of " + t.str() + " must map to one scalar type");
  auto rank = static_cast<unsigned>(p[1].intValue());
  return {tensor ? ir::Type::dynamicTensor(elem[0], rank) : ir::Type::dynamicMemRef(elem[0], rank)};
}

} // namespace

IntrinsicRegistry::IntrinsicRegistry(std::shared_ptr<const dialects::DialectRegistry> dialects,
                                     fir::TypeLattice lattice)
    : dialects_(std::move(dialects)), lattice_(std::move(lattice)) {
  if (!dialects_)
    throw CodegenError("intrinsic registry needs a dialect registry");
  mapPrimitive("f32", ir::Type::f32());
  mapPrimitive("f64", ir::Type::f64());
  for (unsigned w : {1u, 8u, 16u, 32u, 64u})
    mapPrimitive("i" + std::to_string(w), ir::Type::integer(w));
  mapPrimitive("index", ir::Type::index());
  mapPrimitive("Bool", ir::Type::integer(1));
  defineStruct("Nothing", [](const FrontendType &) { return FrontendTypes{}; });
  mapParametric("tensor", [](const FrontendType &t, const IntrinsicRegistry &r) { return mapShaped(t, r, true); });
  mapParametric("memref", [](const FrontendType &t, const IntrinsicRegistry &r) { return mapShaped(t, r, false); });
  defineStruct("Complex", [](const FrontendType &t) {
    if (t.params().size() != 1 || t.params()[0].isIntParam())
      throw CodegenError("expected Complex{T}, got " + t.str());
    return FrontendTypes{t.params()[0], t.params()[0]};
  });

  gotoHook_ = [](BuilderContext &ctx, ir::Block *dest, const ir::ValueList &args) {
    dialects::OpArgs a;
    a.successors.push_back({dest, args});
    ctx.build("cf.br", std::move(a));
  };
  gotoIfNotHook_ = [](BuilderContext &ctx, ir::Value cond, ir::Block *t, const ir::ValueList &targs, ir::Block *f,
                      const ir::ValueList &fargs) {
    dialects::OpArgs a;
    a.operands = {cond};
    a.successors.push_back({t, targs});
    a.successors.push_back({f, fargs});
    ctx.build("cf.cond_br", std::move(a));
  };
  returnHook_ = [](BuilderContext &ctx, const ir::ValueList &values) {
    dialects::OpArgs a;
    a.operands = values;
    ctx.build("func.return", std::move(a));
  };
}

void IntrinsicRegistry::registerIntrinsic(IntrinsicSignature signature, IntrinsicBuilder builder) {
  if (!builder)
    throw CodegenError("intrinsic " + signature.str() + " has no builder");
  auto &list = methods_[signature.name];
  for (const auto &m : list)
    if (m.signature == signature)
      throw CodegenError("intrinsic " + signature.str() + " is already registered");
  list.push_back({std::move(signature), std::move(builder)});
}

bool IntrinsicRegistry::hasMethods(std::string_view name) const { return methods_.find(name) != methods_.end(); }

std::vector<const Method *> IntrinsicRegistry::methods(std::string_view name) const {
  std::vector<const Method *> out;
  if (auto it = methods_.find(name); it != methods_.end())
    for (const auto &m : it->second)
      out.push_back(&m);
  return out;
}

Resolution IntrinsicRegistry::lookup(std::string_view name, const FrontendTypes &argTypes) const {
  auto applicable = [&](const FrontendTypes &params) {
    if (params.size() != argTypes.size())
      return false;
    for (std::size_t i = 0; i < params.size(); ++i)
      if (!lattice_.isSubtype(argTypes[i], params[i]))
        return false;
    return true;
  };
  // a <= b pointwise
  auto moreSpecific = [&](const FrontendTypes &a, const FrontendTypes &b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!lattice_.isSubtype(a[i], b[i]))
        return false;
    return true;
  };

  std::vector<const Method *> candidates;
  for (const Method *m : methods(name))
    if (applicable(m->signature.params))
      candidates.push_back(m);

  Resolution res;
  if (candidates.empty())
    return res;
  std::vector<const Method *> minimal;
  for (const Method *m : candidates) {
    bool dominated = false;
    for (const Method *o : candidates)
      if (o != m && moreSpecific(o->signature.params, m->signature.params) &&
          !moreSpecific(m->signature.params, o->signature.params))
        dominated = true;
    if (!dominated)
      minimal.push_back(m);
  }
  if (minimal.size() == 1) {
    res.status = Resolution::Status::Found;
    res.method = minimal.front();
  } else {
    res.status = Resolution::Status::Ambiguous;
    res.candidates = std::move(minimal);
  }
  return res;
}

const Method &IntrinsicRegistry::resolve(std::string_view name, const FrontendTypes &argTypes) const {
  Resolution res = lookup(name, argTypes);
  const std::string call = std::string(name) + "(" + fir::join(argTypes) + ")";
  if (res.status == Resolution::Status::NoMethod)
    throw NoMethodError("no method matching " + call);
  if (res.status == Resolution::Status::Ambiguous) {
    std::string msg = "ambiguous call " + call + "; candidates:";
    for (const Method *m : res.candidates)
      msg += " " + m->signature.str();
    throw AmbiguousError(msg);
  }
  return *res.method;
}

void IntrinsicRegistry::mapPrimitive(const std::string &name, ir::Type type) { primitives_[name] = std::move(type); }

void IntrinsicRegistry::mapParametric(const std::string &name, ParametricMapper mapper) {
  parametric_[name] = std::move(mapper);
}

void IntrinsicRegistry::defineStruct(const std::string &name, StructLayout layout) {
  structs_[name] = std::move(layout);
}

std::vector<ir::Type> IntrinsicRegistry::mapType(const FrontendType &type) const {
  if (!type.isConcrete())
    throw CodegenError("cannot map non-concrete type " + type.str() + " to IR types");
  if (auto it = structs_.find(type.name()); it != structs_.end()) {
    std::vector<ir::Type> out;
    for (const auto &field : it->second(type)) {
      auto part = mapType(field);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (auto it = parametric_.find(type.name()); it != parametric_.end())
    return it->second(type, *this);
  if (auto it = primitives_.find(type.name()); it != primitives_.end()) {
    if (!type.params().empty())
      throw CodegenError("primitive type " + type.name() + " takes no parameters");
    return {it->second};
  }
  throw CodegenError("no IR type mapping for " + type.str());
}

std::optional<FrontendType> IntrinsicRegistry::frontendTypeFor(const ir::Type &type) const {
  if (type.isShaped()) {
    auto elem = frontendTypeFor(type.elementType());
    if (!elem)
      return std::nullopt;
    return FrontendType::concrete(type.isTensor() ? "tensor" : "memref",
                                  {*elem, FrontendType::intParam(static_cast<std::int64_t>(type.rank()))});
  }
  for (const auto &[name, t] : primitives_)
    if (t == type && name != "Bool")
      return FrontendType::concrete(name);
  return std::nullopt;
}

void IntrinsicRegistry::registerBoolConversion(const FrontendType &conditionType, BoolConversion conversion) {
  for (auto &[t, c] : boolConversions_)
    if (t == conditionType) {
      c = std::move(conversion);
      return;
    }
  boolConversions_.emplace_back(conditionType, std::move(conversion));
}

const IntrinsicRegistry::BoolConversion *IntrinsicRegistry::boolConversion(const FrontendType &conditionType) const {
  for (const auto &[t, c] : boolConversions_)
    if (t == conditionType)
      return &c;
  return nullptr;
}

} // namespace bridgegen::codegen
