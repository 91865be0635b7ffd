#include "bridgegen/fir/Fir.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

namespace bridgegen::fir {

const FrontendType *FirStatement::type() const {
  if (auto *inv = as<Invoke>())
    return &inv->type;
  if (auto *phi = as<Phi>())
    return &phi->type;
  return nullptr;
}

const FirFunction *FirProgram::find(std::string_view name) const {
  for (const auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

std::vector<unsigned> successors(const FirFunction &fn, unsigned number) {
  const FirBlock &block = fn.block(number);
  const unsigned next = number + 1;
  const bool hasNext = next <= fn.numBlocks();
  for (const auto &stmt : block.statements) {
    if (auto *g = stmt.as<Goto>())
      return {g->target};
    if (auto *g = stmt.as<GotoIfNot>()) {
      if (hasNext)
        return {next, g->target};
      return {g->target};
    }
    if (stmt.is<Return>())
      return {};
  }
  if (hasNext)
    return {next};
  return {};
}

std::vector<std::vector<unsigned>> predecessors(const FirFunction &fn) {
  std::vector<std::vector<unsigned>> preds(fn.numBlocks());
  for (unsigned b = 1; b <= fn.numBlocks(); ++b)
    for (auto s : successors(fn, b))
      if (s >= 1 && s <= fn.numBlocks()) {
        auto &list = preds[s - 1];
        if (std::find(list.begin(), list.end(), b) == list.end())
          list.push_back(b);
      }
  for (auto &list : preds)
    std::sort(list.begin(), list.end());
  return preds;
}

std::vector<bool> reachableBlocks(const FirFunction &fn) {
  std::vector<bool> seen(fn.numBlocks(), false);
  if (fn.numBlocks() == 0)
    return seen;
  std::vector<unsigned> work = {1};
  seen[0] = true;
  while (!work.empty()) {
    unsigned b = work.back();
    work.pop_back();
    for (auto s : successors(fn, b))
      if (s >= 1 && s <= fn.numBlocks() && !seen[s - 1]) {
        seen[s - 1] = true;
        work.push_back(s);
      }
  }
  return seen;
}

std::map<std::uint32_t, DefSite> definitionSites(const FirFunction &fn) {
  std::map<std::uint32_t, DefSite> sites;
  std::size_t position = 0;
  for (unsigned b = 1; b <= fn.numBlocks(); ++b) {
    const auto &stmts = fn.block(b).statements;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      ++position;
      if (stmts[i].definesValue())
        sites.emplace(stmts[i].id, DefSite{b, i, position});
    }
  }
  return sites;
}

FrontendType typeOf(const FirFunction &fn, const FirArg &arg) {
  switch (arg.kind) {
  case FirArg::Kind::Ssa:
    for (const auto &block : fn.blocks)
      for (const auto &stmt : block.statements)
        if (stmt.definesValue() && stmt.id == arg.ref)
          return *stmt.type();
    throw Error("undefined SSA value %" + std::to_string(arg.ref) + " in " + fn.name);
  case FirArg::Kind::Param:
    if (arg.ref >= fn.paramTypes.size())
      throw Error("parameter index out of range in " + fn.name);
    return fn.paramTypes[arg.ref];
  case FirArg::Kind::Int:
    return naturalIntType();
  case FirArg::Kind::Float:
    return naturalFloatType();
  case FirArg::Kind::Bool:
    return boolType();
  }
  return FrontendType::any();
}

static void forEachArg(FirStatement &stmt, const std::function<void(FirArg &)> &fn) {
  if (auto *inv = stmt.as<Invoke>())
    for (auto &a : inv->args)
      fn(a);
  else if (auto *phi = stmt.as<Phi>())
    for (auto &in : phi->incomings)
      fn(in.value);
  else if (auto *g = stmt.as<GotoIfNot>())
    fn(g->cond);
  else if (auto *r = stmt.as<Return>(); r && r->value)
    fn(*r->value);
}

FirFunction normalize(const FirFunction &fn) {
  FirFunction out = fn;
  std::map<std::uint32_t, std::uint32_t> renumber;
  std::uint32_t position = 0;
  for (auto &block : out.blocks)
    for (auto &stmt : block.statements) {
      ++position;
      if (stmt.definesValue()) {
        renumber[stmt.id] = position;
        stmt.id = position;
      } else {
        stmt.id = 0;
      }
    }
  for (auto &block : out.blocks)
    for (auto &stmt : block.statements)
      forEachArg(stmt, [&](FirArg &a) {
        if (a.isSsa()) {
          auto it = renumber.find(a.ref);
          if (it != renumber.end())
            a.ref = it->second;
        }
      });
  return out;
}

//===----------------------------------------------------------------------===//
// Printing
//===----------------------------------------------------------------------===//

static std::string printFloatLiteral(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos)
    s += ".0";
  return s;
}

std::string printArg(const FirFunction &fn, const FirArg &arg) {
  switch (arg.kind) {
  case FirArg::Kind::Ssa:
    return "%" + std::to_string(arg.ref);
  case FirArg::Kind::Param:
    return arg.ref < fn.paramNames.size() ? fn.paramNames[arg.ref] : "_" + std::to_string(arg.ref + 1);
  case FirArg::Kind::Int:
    return std::to_string(arg.intValue);
  case FirArg::Kind::Float:
    return printFloatLiteral(arg.floatValue);
  case FirArg::Kind::Bool:
    return arg.boolValue ? "true" : "false";
  }
  return "?";
}

std::string printFunction(const FirFunction &fn) {
  std::ostringstream os;
  os << "fn " << fn.name << "(";
  for (std::size_t i = 0; i < fn.paramTypes.size(); ++i) {
    std::string name = i < fn.paramNames.size() ? fn.paramNames[i] : "_" + std::to_string(i + 1);
    os << (i ? ", " : "") << name << ": " << fn.paramTypes[i].str();
  }
  os << ")\n";
  for (unsigned b = 1; b <= fn.numBlocks(); ++b) {
    os << b << ":\n";
    for (const auto &stmt : fn.block(b).statements) {
      os << "  ";
      if (auto *inv = stmt.as<Invoke>()) {
        os << "%" << stmt.id << " = invoke " << inv->target << "(";
        for (std::size_t i = 0; i < inv->args.size(); ++i)
          os << (i ? ", " : "") << printArg(fn, inv->args[i]);
        os << ") :: " << inv->type.str();
      } else if (auto *phi = stmt.as<Phi>()) {
        os << "%" << stmt.id << " = phi (";
        for (std::size_t i = 0; i < phi->incomings.size(); ++i)
          os << (i ? ", " : "") << "#" << phi->incomings[i].pred << " => " << printArg(fn, phi->incomings[i].value);
        os << ") :: " << phi->type.str();
      } else if (auto *g = stmt.as<Goto>()) {
        os << "goto #" << g->target;
      } else if (auto *g = stmt.as<GotoIfNot>()) {
        os << "goto #" << g->target << " ifnot " << printArg(fn, g->cond);
      } else if (auto *r = stmt.as<Return>()) {
        os << "return";
        if (r->value)
          os << " " << printArg(fn, *r->value);
      } else {
        os << "nothing";
      }
      os << "\n";
    }
  }
  return os.str();
}

std::string printProgram(const FirProgram &program) {
  std::string s;
  for (std::size_t i = 0; i < program.functions.size(); ++i) {
    if (i)
      s += "\n";
    s += printFunction(program.functions[i]);
  }
  return s;
}

} // namespace bridgegen::fir
