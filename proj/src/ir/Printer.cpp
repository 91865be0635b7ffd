#include "bridgegen/ir/Printer.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace bridgegen::ir {
namespace {

bool isBinaryArith(const std::string &name) {
  static const std::set<std::string> names = {"arith.addf", "arith.subf", "arith.mulf", "arith.divf",
                                               "arith.addi", "arith.subi", "arith.muli"};
  return names.count(name) != 0;
}

bool isUnaryArith(const std::string &name) { return name == "arith.negf" || name == "math.exp"; }

bool isGpuIdOp(const std::string &name) {
  return name == "gpu.thread_id" || name == "gpu.block_id" || name == "gpu.block_dim";
}

class NameState {
public:
  void numberSymbol(const Operation &op) {
    if (op.numRegions() == 0)
      return;
    const bool isFunc = op.name() == "func.func";
    for (std::size_t r = 0; r < op.numRegions(); ++r)
      numberRegion(op.region(r), isFunc);
  }

  std::string name(Value v) const {
    auto it = names_.find(v);
    return it == names_.end() ? "%<" + std::to_string(v.id()) + ">" : it->second;
  }

private:
  void numberRegion(const Region &region, bool functionBody) {
    for (std::size_t b = 0; b < region.size(); ++b) {
      const Block &block = region.block(b);
      for (auto arg : block.arguments())
        names_[arg] = b == 0 ? "%arg" + std::to_string(nextArg_++) : "%" + std::to_string(nextValue_++);
      (void)functionBody;
      block.forEachOp([&](const Operation &op) {
        for (auto res : op.results()) {
          if (op.name() == "arith.constant") {
            names_[res] = nextConst_ == 0 ? "%cst" : "%cst_" + std::to_string(nextConst_ - 1);
            ++nextConst_;
          } else {
            names_[res] = "%" + std::to_string(nextValue_++);
          }
        }
        for (std::size_t r = 0; r < op.numRegions(); ++r)
          numberRegion(op.region(r), false);
      });
    }
  }

  std::unordered_map<Value, std::string, Value::Hash> names_;
  unsigned nextArg_ = 0;
  unsigned nextValue_ = 0;
  unsigned nextConst_ = 0;
};

class Printer {
public:
  explicit Printer(std::ostringstream &os) : os_(os) {}

  void printModule(const Module &module) {
    os_ << "module {\n";
    const Block &top = module.topBlock();
    for (std::size_t i = 0; i < top.size(); ++i)
      printTopLevel(top.op(i), 1);
    os_ << "}\n";
  }

  void printTopLevel(const Operation &op, unsigned indent) {
    names_ = NameState();
    names_.numberSymbol(op);
    printOp(op, indent);
  }

  void setNames(NameState names) { names_ = std::move(names); }

  void printOp(const Operation &op, unsigned indent) {
    pad(indent);
    const auto &n = op.name();
    const auto &operands = op.operands();
    const auto &results = op.results();

    if (n == "func.func" && printFunc(op, indent))
      return;

    if (!results.empty()) {
      for (std::size_t i = 0; i < results.size(); ++i)
        os_ << (i ? ", " : "") << names_.name(results[i]);
      os_ << " = ";
    }

    if (n == "arith.constant" && results.size() == 1 && op.attr("value") && op.attr("value")->isTyped()) {
      os_ << n << " " << op.attr("value")->str() << "\n";
    } else if (isBinaryArith(n) && operands.size() == 2 && results.size() == 1) {
      os_ << n << " " << ref(operands[0]) << ", " << ref(operands[1]) << " : " << results[0].type().str() << "\n";
    } else if (isUnaryArith(n) && operands.size() == 1 && results.size() == 1) {
      os_ << n << " " << ref(operands[0]) << " : " << results[0].type().str() << "\n";
    } else if (n == "arith.cmpi" && operands.size() == 2 && op.attr("predicate") && op.attr("predicate")->isString()) {
      os_ << n << " " << op.attr("predicate")->text() << ", " << ref(operands[0]) << ", " << ref(operands[1])
          << " : " << operands[0].type().str() << "\n";
    } else if (n == "arith.index_cast" && operands.size() == 1 && results.size() == 1) {
      os_ << n << " " << ref(operands[0]) << " : " << operands[0].type().str() << " to "
          << results[0].type().str() << "\n";
    } else if (n == "func.return") {
      os_ << "return";
      printValuesWithTypes(operands, " ");
      os_ << "\n";
    } else if (n == "func.call" && op.attr("callee") && op.attr("callee")->isSymbol()) {
      os_ << n << " @" << op.attr("callee")->text() << "(" << refs(operands) << ") : ("
          << join(typesOf(operands)) << ") -> " << resultTypeStr(results) << "\n";
    } else if (n == "cf.br" && op.successors().size() == 1 && operands.empty()) {
      os_ << n << " " << successorStr(op.successors()[0]) << "\n";
    } else if (n == "cf.cond_br" && op.successors().size() == 2 && operands.size() == 1) {
      os_ << n << " " << ref(operands[0]) << ", " << successorStr(op.successors()[0]) << ", "
          << successorStr(op.successors()[1]) << "\n";
    } else if (isGpuIdOp(n) && operands.empty() && op.attr("dimension") && op.attr("dimension")->isString()) {
      os_ << n << " " << op.attr("dimension")->text() << "\n";
    } else if (n == "memref.load" && operands.size() >= 1 && results.size() == 1) {
      os_ << n << " " << ref(operands[0]) << "[" << refs({operands.begin() + 1, operands.end()}) << "] : "
          << operands[0].type().str() << "\n";
    } else if (n == "memref.store" && operands.size() >= 2) {
      os_ << n << " " << ref(operands[0]) << ", " << ref(operands[1]) << "["
          << refs({operands.begin() + 2, operands.end()}) << "] : " << operands[1].type().str() << "\n";
    } else if (n == "linalg.yield") {
      os_ << n;
      printValuesWithTypes(operands, " ");
      os_ << "\n";
    } else if (n == "linalg.generic" && operands.size() >= 1 && op.numRegions() == 1) {
      printGeneric(op, indent);
    } else {
      printGenericForm(op, indent);
    }
  }

private:
  void pad(unsigned indent) {
    for (unsigned i = 0; i < indent; ++i)
      os_ << "  ";
  }

  std::string ref(Value v) const { return names_.name(v); }

  std::string refs(const ValueList &values) const {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i)
      s += (i ? ", " : "") + ref(values[i]);
    return s;
  }

  static std::vector<Type> typesOf(const ValueList &values) {
    std::vector<Type> types;
    for (auto v : values)
      types.push_back(v.type());
    return types;
  }

  static std::string resultTypeStr(const ValueList &results) {
    if (results.size() == 1)
      return results[0].type().str();
    return "(" + join(typesOf(results)) + ")";
  }

  void printValuesWithTypes(const ValueList &values, const char *lead) {
    if (values.empty())
      return;
    os_ << lead << refs(values) << " : " << join(typesOf(values));
  }

  std::string blockLabel(const Block &block) const {
    if (block.parentRegion())
      if (auto idx = block.parentRegion()->indexOf(block))
        return "^bb" + std::to_string(*idx);
    return "^bb?" + std::to_string(block.id());
  }

  std::string successorStr(const Successor &succ) const {
    std::string s = succ.block ? blockLabel(*succ.block) : "^<null>";
    if (!succ.args.empty())
      s += "(" + refs(succ.args) + " : " + join(typesOf(succ.args)) + ")";
    return s;
  }

  std::string attrDict(const AttrMap &attrs, const std::set<std::string> &skip,
                       const std::vector<std::string> &leading = {}) const {
    std::vector<std::string> parts;
    for (const auto &key : leading)
      if (auto it = attrs.find(key); it != attrs.end())
        parts.push_back(key + " = " + it->second.str());
    for (const auto &[key, value] : attrs) {
      if (skip.count(key) || std::find(leading.begin(), leading.end(), key) != leading.end())
        continue;
      parts.push_back(key + " = " + value.str());
    }
    if (parts.empty())
      return "";
    std::string s = "{";
    for (std::size_t i = 0; i < parts.size(); ++i)
      s += (i ? ", " : "") + parts[i];
    return s + "}";
  }

  bool printFunc(const Operation &op, unsigned indent) {
    const Attribute *sym = op.attr("sym_name");
    const Attribute *fty = op.attr("function_type");
    if (!sym || !sym->isString() || !fty || !fty->isType() || !fty->typeValue().isFunction() ||
        op.numRegions() != 1)
      return false;
    const Type &type = fty->typeValue();
    const Region &body = op.region(0);
    os_ << "func.func @" << sym->text() << "(";
    if (!body.empty()) {
      const Block &entry = body.entry();
      for (std::size_t i = 0; i < entry.numArguments(); ++i)
        os_ << (i ? ", " : "") << ref(entry.argument(i)) << ": " << entry.argument(i).type().str();
    } else {
      os_ << join(type.inputs());
    }
    os_ << ")";
    if (type.results().size() == 1)
      os_ << " -> " << type.results()[0].str();
    else if (type.results().size() > 1)
      os_ << " -> (" << join(type.results()) << ")";
    if (body.empty()) {
      os_ << "\n";
      return true;
    }
    os_ << " {\n";
    printRegionBlocks(body, indent + 1, /*entryArgsInSignature=*/true);
    pad(indent);
    os_ << "}\n";
    return true;
  }

  void printGeneric(const Operation &op, unsigned indent) {
    const auto &operands = op.operands();
    ValueList ins(operands.begin(), operands.end() - 1);
    ValueList outs(operands.end() - 1, operands.end());
    os_ << "linalg.generic " << attrDict(op.attributes(), {}, {"indexing_maps", "iterator_types"});
    if (!ins.empty())
      os_ << " ins(" << refs(ins) << " : " << join(typesOf(ins)) << ")";
    os_ << " outs(" << refs(outs) << " : " << join(typesOf(outs)) << ") {\n";
    printRegionBlocks(op.region(0), indent + 1, false);
    pad(indent);
    os_ << "}";
    if (!op.results().empty())
      os_ << " -> " << join(typesOf(op.results()));
    os_ << "\n";
  }

  void printGenericForm(const Operation &op, unsigned indent) {
    os_ << "\"" << op.name() << "\"(" << refs(op.operands()) << ")";
    if (!op.successors().empty()) {
      os_ << "[";
      for (std::size_t i = 0; i < op.successors().size(); ++i)
        os_ << (i ? ", " : "") << successorStr(op.successors()[i]);
      os_ << "]";
    }
    if (op.numRegions()) {
      os_ << " (";
      for (std::size_t r = 0; r < op.numRegions(); ++r) {
        os_ << (r ? ", " : "") << "{\n";
        printRegionBlocks(op.region(r), indent + 1, false);
        pad(indent);
        os_ << "}";
      }
      os_ << ")";
    }
    std::string attrs = attrDict(op.attributes(), {});
    if (!attrs.empty())
      os_ << " " << attrs;
    os_ << " : (" << join(typesOf(op.operands())) << ") -> ";
    os_ << (op.numResults() == 1 ? op.results()[0].type().str() : "(" + join(typesOf(op.results())) + ")");
    os_ << "\n";
  }

  void printRegionBlocks(const Region &region, unsigned indent, bool entryArgsInSignature) {
    // Predecessors by region position, in block order.
    std::vector<std::set<std::size_t>> preds(region.size());
    for (std::size_t b = 0; b < region.size(); ++b)
      if (const Operation *term = region.block(b).back())
        for (const auto &s : term->successors())
          if (s.block)
            if (auto idx = region.indexOf(*s.block))
              preds[*idx].insert(b);

    for (std::size_t b = 0; b < region.size(); ++b) {
      const Block &block = region.block(b);
      bool label = b > 0 || region.size() > 1 || (!entryArgsInSignature && block.numArguments() > 0);
      if (label) {
        pad(indent - 1);
        os_ << "^bb" << b;
        if (block.numArguments() && !(b == 0 && entryArgsInSignature)) {
          os_ << "(";
          for (std::size_t i = 0; i < block.numArguments(); ++i)
            os_ << (i ? ", " : "") << ref(block.argument(i)) << ": " << block.argument(i).type().str();
          os_ << ")";
        }
        os_ << ":";
        if (!preds[b].empty()) {
          if (preds[b].size() == 1)
            os_ << " // pred: ";
          else
            os_ << " // " << preds[b].size() << " preds: ";
          bool first = true;
          for (auto p : preds[b]) {
            os_ << (first ? "" : ", ") << "^bb" << p;
            first = false;
          }
        }
        os_ << "\n";
      }
      block.forEachOp([&](const Operation &op) { printOp(op, indent); });
    }
  }

  std::ostringstream &os_;
  NameState names_;
};

} // namespace

std::string printModule(const Module &module) {
  std::ostringstream os;
  Printer(os).printModule(module);
  return os.str();
}

std::string printOperation(const Operation &op) {
  const Operation *top = &op;
  while (top->parentOp())
    top = top->parentOp();
  NameState names;
  names.numberSymbol(*top);
  std::ostringstream os;
  Printer printer(os);
  printer.setNames(std::move(names));
  printer.printOp(op, 0);
  return os.str();
}

} // namespace bridgegen::ir
