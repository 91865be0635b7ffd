#include "bridgegen/driver/Driver.hpp"

#include <json.hpp>

#include <unordered_map>

namespace bridgegen::driver {

namespace {

using json = nlohmann::json;

struct PendingOp {
  ir::Operation *op;
  ir::Region *region; ///< region holding the op, for successor indices
  const json *spec;
};

class Loader {
public:
  explicit Loader(ir::Module &module) : module_(module) {}

  void load(const json &root) {
    if (!root.is_object() || !root.contains("ops") || !root["ops"].is_array())
      fail("top level must be an object with an \"ops\" array");
    for (const auto &op : root["ops"])
      createOp(module_.topBlock(), &module_.body(), op);
    for (const auto &p : pending_)
      resolve(p);
  }

private:
  [[noreturn]] static void fail(const std::string &msg) { throw ModuleLoadError(msg); }

  static ir::Type type(const json &j) {
    if (!j.is_string())
      fail("types are strings, got " + j.dump());
    try {
      return ir::parseType(j.get<std::string>());
    } catch (const Error &e) {
      fail(e.what());
    }
  }

  static ir::Attribute attribute(const json &j) {
    if (j.is_string())
      return ir::Attribute::string(j.get<std::string>());
    if (j.is_boolean())
      return ir::Attribute::intAttr(j.get<bool>() ? 1 : 0, ir::Type::integer(1));
    if (j.is_number_integer())
      return ir::Attribute::intAttr(j.get<std::int64_t>(), ir::Type::integer(64));
    if (j.is_number())
      return ir::Attribute::floatAttr(j.get<double>(), ir::Type::f64());
    if (j.is_array()) {
      std::vector<ir::Attribute> elems;
      for (const auto &e : j)
        elems.push_back(attribute(e));
      return ir::Attribute::array(std::move(elems));
    }
    if (j.is_object()) {
      if (j.contains("int"))
        return ir::Attribute::intAttr(j["int"].get<std::int64_t>(), type(j.value("type", json("i64"))));
      if (j.contains("float"))
        return ir::Attribute::floatAttr(j["float"].get<double>(), type(j.value("type", json("f64"))));
      if (j.contains("symbol"))
        return ir::Attribute::symbol(j["symbol"].get<std::string>());
      if (j.contains("map")) {
        const json &m = j["map"];
        ir::IndexMap map;
        map.numDims = m.at("dims").get<unsigned>();
        map.results = m.at("results").get<std::vector<unsigned>>();
        return ir::Attribute::indexMap(std::move(map));
      }
      if (j.contains("type"))
        return ir::Attribute::type(type(j["type"]));
    }
    fail("unsupported attribute " + j.dump());
  }

  void define(const std::string &name, ir::Value v) {
    if (!values_.emplace(name, v).second)
      fail("value " + name + " defined twice");
  }

  ir::Block &createBlock(ir::Region &region, const json &spec) {
    std::vector<ir::Type> types;
    std::vector<std::string> names;
    if (spec.contains("args"))
      for (const auto &a : spec["args"]) {
        names.push_back(a.at("name").get<std::string>());
        types.push_back(type(a.at("type")));
      }
    ir::Block &block = module_.appendBlock(region, types);
    for (std::size_t i = 0; i < names.size(); ++i)
      define(names[i], block.argument(i));
    return block;
  }

  void createOp(ir::Block &block, ir::Region *region, const json &spec) {
    if (!spec.is_object() || !spec.contains("name"))
      fail("operation without a name: " + spec.dump());
    ir::OperationState state;
    state.name = spec["name"].get<std::string>();
    std::vector<std::string> resultNames;
    if (spec.contains("results"))
      for (const auto &r : spec["results"]) {
        resultNames.push_back(r.at("name").get<std::string>());
        state.resultTypes.push_back(type(r.at("type")));
      }
    if (spec.contains("attributes"))
      for (const auto &[k, v] : spec["attributes"].items())
        state.attributes[k] = attribute(v);
    const json *regions = spec.contains("regions") ? &spec["regions"] : nullptr;
    state.numRegions = regions ? static_cast<unsigned>(regions->size()) : 0;

    module_.setInsertionPointToEnd(block);
    ir::Operation &op = module_.createOp(state);
    for (std::size_t i = 0; i < resultNames.size(); ++i)
      define(resultNames[i], op.result(i));
    pending_.push_back({&op, region, &spec});

    if (regions)
      for (std::size_t r = 0; r < regions->size(); ++r) {
        ir::Region &nested = op.region(r);
        std::vector<std::pair<ir::Block *, const json *>> blocks;
        for (const auto &b : (*regions)[r])
          blocks.push_back({&createBlock(nested, b), &b});
        for (auto [b, bspec] : blocks)
          if (bspec->contains("ops"))
            for (const auto &inner : (*bspec)["ops"])
              createOp(*b, &nested, inner);
      }
  }

  ir::Value lookup(const json &name) const {
    auto it = values_.find(name.get<std::string>());
    if (it == values_.end())
      fail("undefined value " + name.get<std::string>());
    return it->second;
  }

  void resolve(const PendingOp &p) {
    const json &spec = *p.spec;
    if (spec.contains("operands")) {
      ir::ValueList operands;
      for (const auto &o : spec["operands"])
        operands.push_back(lookup(o));
      p.op->setOperands(std::move(operands));
    }
    if (spec.contains("successors")) {
      std::vector<ir::Successor> succs;
      for (const auto &s : spec["successors"]) {
        ir::Successor succ;
        auto index = s.at("block").get<std::int64_t>();
        if (index >= 0 && static_cast<std::size_t>(index) < p.region->size())
          succ.block = &p.region->block(static_cast<std::size_t>(index));
        else
          succ.block = &module_.createDetachedBlock();
        if (s.contains("args"))
          for (const auto &a : s["args"])
            succ.args.push_back(lookup(a));
        succs.push_back(std::move(succ));
      }
      p.op->setSuccessors(std::move(succs));
    }
  }

  ir::Module &module_;
  std::unordered_map<std::string, ir::Value> values_;
  std::vector<PendingOp> pending_;
};

} // namespace

ir::ModulePtr loadModuleJson(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception &e) {
    throw ModuleLoadError(std::string("invalid JSON: ") + e.what());
  }
  auto module = ir::Module::create();
  try {
    Loader(*module).load(root);
  } catch (const json::exception &e) {
    throw ModuleLoadError(std::string("malformed module: ") + e.what());
  }
  return module;
}

} // namespace bridgegen::driver
