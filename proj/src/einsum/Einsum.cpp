#include "bridgegen/einsum/Einsum.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace bridgegen::einsum {

using fir::FrontendType;

namespace {

std::string tupleStr(const IndexTuple &t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i)
    s += (i ? "," : "") + t[i];
  return s + ")";
}

class SpecParser {
public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  EinsumSpec parse() {
    EinsumSpec spec;
    spec.inputs.push_back(tuple());
    while (consume(","))
      spec.inputs.push_back(tuple());
    if (!consume("->"))
      fail("expected '->'");
    spec.output = tuple();
    skip();
    if (pos_ != text_.size())
      fail("unexpected trailing text");
    return spec;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw EinsumError("invalid einsum '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " +
                      msg);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool consume(std::string_view tok) {
    skip();
    if (text_.substr(pos_, tok.size()) != tok)
      return false;
    pos_ += tok.size();
    return true;
  }
  IndexTuple tuple() {
    if (!consume("("))
      fail("expected '('");
    IndexTuple t;
    if (consume(")"))
      return t;
    while (true) {
      skip();
      consume(":"); // Julia symbol syntax
      std::size_t start = pos_;
      if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          ++pos_;
      if (start == pos_)
        fail("expected an index name");
      t.emplace_back(text_.substr(start, pos_ - start));
      if (consume(")"))
        return t;
      if (!consume(","))
        fail("expected ',' or ')'");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void checkUnique(const IndexTuple &t, const std::string &what) {
  std::set<std::string> seen;
  for (const auto &i : t)
    if (!seen.insert(i).second)
      throw EinsumError("index '" + i + "' repeats within " + what + " " + tupleStr(t) +
                        "; diagonals and traces are not supported");
}

} // namespace

std::string EinsumSpec::str() const {
  std::string s;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    s += (i ? "," : "") + tupleStr(inputs[i]);
  return s + "->" + tupleStr(output);
}

const char *iteratorName(IteratorType t) { return t == IteratorType::Parallel ? "parallel" : "reduction"; }

EinsumSpec parseEinsum(std::string_view text) {
  EinsumSpec spec = SpecParser(text).parse();
  for (std::size_t i = 0; i < spec.inputs.size(); ++i)
    checkUnique(spec.inputs[i], "input " + std::to_string(i + 1));
  checkUnique(spec.output, "the output");
  for (const auto &idx : spec.output) {
    bool found = false;
    for (const auto &in : spec.inputs)
      found |= std::find(in.begin(), in.end(), idx) != in.end();
    if (!found)
      throw EinsumError("output index '" + idx + "' does not appear in any input");
  }
  spec.axes = spec.output;
  for (const auto &in : spec.inputs)
    for (const auto &idx : in)
      if (std::find(spec.axes.begin(), spec.axes.end(), idx) == spec.axes.end())
        spec.axes.push_back(idx);
  return spec;
}

DerivedMaps deriveMaps(const EinsumSpec &spec) {
  DerivedMaps out;
  auto axisOf = [&](const std::string &idx) {
    auto it = std::find(spec.axes.begin(), spec.axes.end(), idx);
    if (it == spec.axes.end())
      throw EinsumError("index '" + idx + "' is not an iteration axis");
    return static_cast<unsigned>(it - spec.axes.begin());
  };
  auto mapFor = [&](const IndexTuple &t) {
    ir::IndexMap m;
    m.numDims = static_cast<unsigned>(spec.axes.size());
    for (const auto &idx : t)
      m.results.push_back(axisOf(idx));
    return m;
  };
  for (const auto &in : spec.inputs)
    out.maps.push_back(mapFor(in));
  out.maps.push_back(mapFor(spec.output));
  for (const auto &axis : spec.axes) {
    bool inOutput = std::find(spec.output.begin(), spec.output.end(), axis) != spec.output.end();
    out.iterators.push_back(inOutput ? IteratorType::Parallel : IteratorType::Reduction);
  }
  return out;
}

namespace {

/// Body of the generic op: product of the input elements added to the
/// output element, or the input element itself for a plain copy.
fir::FirFunction synthesizeBody(const EinsumSpec &spec, const DerivedMaps &maps, const FrontendType &elem) {
  fir::FirFunction fn;
  fn.name = "einsum_body";
  const std::size_t n = spec.inputs.size();
  for (std::size_t i = 0; i <= n; ++i) {
    fn.paramNames.push_back(i < n ? "_in" + std::to_string(i + 1) : "_out");
    fn.paramTypes.push_back(elem);
  }
  fir::FirBlock block;
  const bool allParallel = std::all_of(maps.iterators.begin(), maps.iterators.end(),
                                       [](IteratorType t) { return t == IteratorType::Parallel; });
  if (n == 1 && allParallel) {
    block.statements.push_back({0, fir::Return{fir::FirArg::param(0)}});
  } else {
    std::uint32_t id = 0;
    fir::FirArg acc = fir::FirArg::param(0);
    for (std::size_t i = 1; i < n; ++i) {
      block.statements.push_back({++id, fir::Invoke{"*", {acc, fir::FirArg::param(static_cast<unsigned>(i))}, elem}});
      acc = fir::FirArg::ssa(id);
    }
    block.statements.push_back(
        {++id, fir::Invoke{"+", {fir::FirArg::param(static_cast<unsigned>(n)), acc}, elem}});
    block.statements.push_back({0, fir::Return{fir::FirArg::ssa(id)}});
  }
  fn.blocks.push_back(std::move(block));
  return fir::normalize(fn);
}

} // namespace

ir::Operation &buildGeneric(codegen::BuilderContext &ctx, const EinsumSpec &spec, const ir::ValueList &operands) {
  const std::size_t n = spec.inputs.size();
  if (operands.size() != n + 1)
    throw EinsumError("einsum " + spec.str() + " takes " + std::to_string(n + 1) + " operands, got " +
                      std::to_string(operands.size()));
  std::optional<ir::Type> elem;
  for (std::size_t i = 0; i <= n; ++i) {
    const ir::Type &t = operands[i].type();
    const IndexTuple &tuple = i < n ? spec.inputs[i] : spec.output;
    const std::string what = i < n ? "input " + std::to_string(i + 1) : std::string("output");
    if (!t.isTensor())
      throw EinsumError(what + " has type " + t.str() + ", expected a tensor");
    if (t.rank() != tuple.size())
      throw EinsumError(what + " has rank " + std::to_string(t.rank()) + " but " + tupleStr(tuple) + " needs rank " +
                        std::to_string(tuple.size()));
    if (!t.elementType().isFloat())
      throw EinsumError(what + " has element type " + t.elementType().str() + ", expected a float type");
    if (elem && !(*elem == t.elementType()))
      throw EinsumError(what + " has element type " + t.elementType().str() + ", expected " + elem->str());
    elem = t.elementType();
  }

  DerivedMaps maps = deriveMaps(spec);
  std::vector<ir::Attribute> mapAttrs, iterAttrs;
  for (const auto &m : maps.maps)
    mapAttrs.push_back(ir::Attribute::indexMap(m));
  for (auto it : maps.iterators)
    iterAttrs.push_back(ir::Attribute::string(iteratorName(it)));

  dialects::OpArgs args;
  args.operands = operands;
  args.attributes["indexing_maps"] = ir::Attribute::array(std::move(mapAttrs));
  args.attributes["iterator_types"] = ir::Attribute::array(std::move(iterAttrs));
  ir::Operation &op = ctx.build("linalg.generic", std::move(args));

  auto elemType = ctx.registry().frontendTypeFor(*elem);
  if (!elemType)
    throw EinsumError("no frontend type for element type " + elem->str());
  fir::FirFunction body = synthesizeBody(spec, maps, *elemType);
  codegen::generateRegion(ctx, op.region(0), body, fir::FrontendTypes(n + 1, *elemType),
                          [](codegen::BuilderContext &c, const ir::ValueList &values) {
                            dialects::OpArgs yield;
                            yield.operands = values;
                            c.build("linalg.yield", std::move(yield));
                          });
  return op;
}

void registerEinsumIntrinsic(codegen::IntrinsicRegistry &registry, const std::string &name, EinsumSpec spec) {
  for (const char *t : {"f32", "f64"}) {
    FrontendType elem = FrontendType::concrete(t);
    auto tensorOf = [&](std::size_t rank) {
      return FrontendType::concrete("tensor", {elem, FrontendType::intParam(static_cast<std::int64_t>(rank))});
    };
    fir::FrontendTypes params;
    for (const auto &in : spec.inputs)
      params.push_back(tensorOf(in.size()));
    params.push_back(tensorOf(spec.output.size()));
    registry.registerIntrinsic({name, params}, [spec](codegen::IntrinsicCall &call) -> ir::ValueList {
      ir::ValueList operands;
      for (std::size_t i = 0; i < call.args.size(); ++i)
        operands.push_back(call.arg(i));
      return {buildGeneric(call.ctx, spec, operands).result(0)};
    });
  }
}

std::vector<std::int64_t> checkShapes(const EinsumSpec &spec, const std::vector<std::vector<std::int64_t>> &shapes) {
  const std::size_t n = spec.inputs.size();
  if (shapes.size() != n && shapes.size() != n + 1)
    throw EinsumError("expected " + std::to_string(n) + " input shapes (optionally followed by the output shape), got " +
                      std::to_string(shapes.size()));
  std::map<std::string, std::int64_t> extent;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const IndexTuple &tuple = i < n ? spec.inputs[i] : spec.output;
    if (shapes[i].size() != tuple.size())
      throw EinsumError("shape " + std::to_string(i + 1) + " has rank " + std::to_string(shapes[i].size()) +
                        " but " + tupleStr(tuple) + " needs rank " + std::to_string(tuple.size()));
    for (std::size_t d = 0; d < tuple.size(); ++d) {
      if (shapes[i][d] < 1)
        throw EinsumError("extents must be positive");
      auto [it, inserted] = extent.emplace(tuple[d], shapes[i][d]);
      if (!inserted && it->second != shapes[i][d])
        throw EinsumError("index '" + tuple[d] + "' has extent " + std::to_string(it->second) + " and " +
                          std::to_string(shapes[i][d]));
    }
  }
  std::vector<std::int64_t> out;
  for (const auto &idx : spec.output)
    out.push_back(extent.at(idx));
  return out;
}

ir::ModulePtr buildEinsumModule(const codegen::IntrinsicRegistry &base, const EinsumSpec &spec,
                                const FrontendType &elementType,
                                const std::optional<std::vector<std::vector<std::int64_t>>> &shapes) {
  if (shapes)
    checkShapes(spec, *shapes);
  codegen::IntrinsicRegistry registry = base;
  registerEinsumIntrinsic(registry, "einsum", spec);

  fir::FirFunction fn;
  fn.name = "einsum";
  auto tensorOf = [&](std::size_t rank) {
    return FrontendType::concrete("tensor", {elementType, FrontendType::intParam(static_cast<std::int64_t>(rank))});
  };
  fir::FirBlock block;
  fir::Invoke call{"einsum", {}, tensorOf(spec.output.size())};
  for (std::size_t i = 0; i <= spec.inputs.size(); ++i) {
    bool isOut = i == spec.inputs.size();
    fn.paramNames.push_back(isOut ? "_C" : "_" + std::string(1, static_cast<char>('A' + i % 26)) +
                                               (i >= 26 ? std::to_string(i) : ""));
    fn.paramTypes.push_back(tensorOf(isOut ? spec.output.size() : spec.inputs[i].size()));
    call.args.push_back(fir::FirArg::param(static_cast<unsigned>(i)));
  }
  block.statements.push_back({1, call});
  block.statements.push_back({0, fir::Return{fir::FirArg::ssa(1)}});
  fn.blocks.push_back(std::move(block));
  return codegen::generate(registry, fn, fn.paramTypes);
}

} // namespace bridgegen::einsum
