#include "bridgegen/fir/Passes.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bridgegen::fir {

std::string FirDiagnostic::str() const {
  std::string s;
  if (block) {
    s += "block #" + std::to_string(block);
    if (statement)
      s += ", statement " + std::to_string(statement);
    s += ": ";
  }
  return s + message;
}

std::string FirReport::str() const {
  std::string s;
  for (const auto &d : diagnostics)
    s += d.str() + "\n";
  return s;
}

//===----------------------------------------------------------------------===//
// validateFir
//===----------------------------------------------------------------------===//

namespace {

class Validator {
public:
  explicit Validator(const FirFunction &fn) : fn_(fn) {}

  FirReport run() {
    if (fn_.blocks.empty()) {
      add(0, 0, "function has no blocks");
      return std::move(report_);
    }
    if (!fn_.paramNames.empty() && fn_.paramNames.size() != fn_.paramTypes.size())
      add(0, 0, "parameter names and types differ in count");
    collectDefinitions();
    preds_ = predecessors(fn_);

    std::size_t position = 0;
    for (unsigned b = 1; b <= fn_.numBlocks(); ++b) {
      const auto &stmts = fn_.block(b).statements;
      bool seenNonPhi = false;
      const FirStatement *terminator = nullptr;
      for (std::size_t i = 0; i < stmts.size(); ++i) {
        ++position;
        const FirStatement &stmt = stmts[i];
        const std::size_t sidx = i + 1;
        if (terminator)
          add(b, sidx, "statement after terminator");
        if (auto *phi = stmt.as<Phi>()) {
          if (seenNonPhi)
            add(b, sidx, "phi %" + std::to_string(stmt.id) + " is not at the start of its block");
          checkPhi(b, sidx, stmt.id, *phi);
        } else {
          seenNonPhi = true;
        }
        if (auto *inv = stmt.as<Invoke>()) {
          for (const auto &a : inv->args)
            checkUse(b, sidx, a, position);
        } else if (auto *g = stmt.as<GotoIfNot>()) {
          checkUse(b, sidx, g->cond, position);
          checkTarget(b, sidx, g->target);
        } else if (auto *g = stmt.as<Goto>()) {
          checkTarget(b, sidx, g->target);
        } else if (auto *r = stmt.as<Return>(); r && r->value) {
          checkUse(b, sidx, *r->value, position);
        }
        if (stmt.isTerminator() && !terminator)
          terminator = &stmt;
      }
      if (b == fn_.numBlocks()) {
        if (!terminator)
          add(b, 0, "last block has no terminator and cannot fall through");
        else if (terminator->is<GotoIfNot>())
          add(b, 0, "conditional branch in the last block has no fall-through block");
      }
    }
    return std::move(report_);
  }

private:
  void add(unsigned block, std::size_t stmt, std::string msg) {
    report_.diagnostics.push_back({block, stmt, std::move(msg)});
  }

  void collectDefinitions() {
    std::size_t position = 0;
    for (unsigned b = 1; b <= fn_.numBlocks(); ++b) {
      const auto &stmts = fn_.block(b).statements;
      for (std::size_t i = 0; i < stmts.size(); ++i) {
        ++position;
        if (!stmts[i].definesValue())
          continue;
        if (stmts[i].id == 0) {
          add(b, i + 1, "value statement without an SSA id");
          continue;
        }
        if (!defs_.emplace(stmts[i].id, position).second)
          add(b, i + 1, "duplicate SSA id %" + std::to_string(stmts[i].id));
      }
      blockEnd_.push_back(position);
    }
  }

  bool checkOperand(unsigned b, std::size_t sidx, const FirArg &a) {
    if (a.isParam() && a.ref >= fn_.paramTypes.size()) {
      add(b, sidx, "parameter index " + std::to_string(a.ref) + " out of range");
      return false;
    }
    if (a.isSsa() && !defs_.count(a.ref)) {
      add(b, sidx, "use of undefined SSA value %" + std::to_string(a.ref));
      return false;
    }
    return true;
  }

  void checkUse(unsigned b, std::size_t sidx, const FirArg &a, std::size_t position) {
    if (!checkOperand(b, sidx, a) || !a.isSsa())
      return;
    if (defs_.at(a.ref) >= position)
      add(b, sidx, "use of %" + std::to_string(a.ref) + " before its definition");
  }

  void checkTarget(unsigned b, std::size_t sidx, unsigned target) {
    if (target == 0 || target > fn_.numBlocks())
      add(b, sidx, "branch to undefined block #" + std::to_string(target));
  }

  void checkPhi(unsigned b, std::size_t sidx, std::uint32_t id, const Phi &phi) {
    const auto &preds = preds_[b - 1];
    std::set<unsigned> seen;
    for (const auto &in : phi.incomings) {
      if (std::find(preds.begin(), preds.end(), in.pred) == preds.end()) {
        add(b, sidx, "phi %" + std::to_string(id) + " has an incoming value from #" + std::to_string(in.pred) +
                         ", which is not a predecessor");
        continue;
      }
      if (!seen.insert(in.pred).second)
        add(b, sidx, "phi %" + std::to_string(id) + " lists predecessor #" + std::to_string(in.pred) + " twice");
      if (checkOperand(b, sidx, in.value) && in.value.isSsa() && defs_.at(in.value.ref) > blockEnd_[in.pred - 1])
        add(b, sidx, "phi %" + std::to_string(id) + " uses %" + std::to_string(in.value.ref) +
                         ", which is not defined by the end of #" + std::to_string(in.pred));
    }
    for (unsigned p : preds)
      if (!seen.count(p))
        add(b, sidx, "phi %" + std::to_string(id) + " has no incoming value for predecessor #" + std::to_string(p));
  }

  const FirFunction &fn_;
  FirReport report_;
  std::map<std::uint32_t, std::size_t> defs_;
  std::vector<std::size_t> blockEnd_;
  std::vector<std::vector<unsigned>> preds_;
};

} // namespace

FirReport validateFir(const FirFunction &fn) { return Validator(fn).run(); }

//===----------------------------------------------------------------------===//
// inlineCalls
//===----------------------------------------------------------------------===//

namespace {

std::uint32_t maxId(const FirFunction &fn) {
  std::uint32_t m = 0;
  for (const auto &b : fn.blocks)
    for (const auto &s : b.statements)
      m = std::max(m, s.id);
  return m;
}

class Inliner {
public:
  Inliner(const FirProgram &program, const IntrinsicPredicate &isIntrinsic)
      : program_(program), isIntrinsic_(isIntrinsic) {}

  const FirFunction &inlined(const std::string &name) {
    if (auto it = done_.find(name); it != done_.end())
      return it->second;
    auto onStack = std::find(stack_.begin(), stack_.end(), name);
    if (onStack != stack_.end()) {
      std::vector<std::string> cycle(onStack, stack_.end());
      std::string msg = "recursive call cycle: ";
      for (const auto &f : cycle)
        msg += f + " -> ";
      throw InlineError(msg + name, cycle);
    }
    const FirFunction *fn = program_.find(name);
    if (!fn)
      throw InlineError("no function named '" + name + "'");
    stack_.push_back(name);
    FirFunction result = inlineInto(*fn);
    stack_.pop_back();
    return done_.emplace(name, std::move(result)).first->second;
  }

private:
  /// True when the invoke must be inlined; throws for unresolvable targets.
  bool needsInlining(const FirFunction &fn, const Invoke &inv) {
    FrontendTypes argTypes;
    for (const auto &a : inv.args)
      argTypes.push_back(typeOf(fn, a));
    if (isIntrinsic_ && isIntrinsic_(inv.target, argTypes))
      return false;
    if (program_.contains(inv.target))
      return true;
    throw InlineError("call to '" + inv.target + "(" + join(argTypes) + ")' in '" + fn.name +
                      "' is neither an intrinsic nor a program function");
  }

  FirFunction inlineInto(const FirFunction &fn) {
    // Resolve every call site first so errors surface before splicing.
    bool anyCall = false;
    for (const auto &b : fn.blocks)
      for (const auto &s : b.statements)
        if (auto *inv = s.as<Invoke>(); inv && needsInlining(fn, *inv)) {
          inlined(inv->target);
          anyCall = true;
        }
    if (!anyCall)
      return fn;

    std::uint32_t nextId = maxId(fn) + 1;
    // Blocks are numbered 0-based by position in `out` until the final fixup.
    std::vector<FirBlock> out;
    std::vector<unsigned> firstPiece(fn.numBlocks()), lastPiece(fn.numBlocks());
    // Statements copied from the caller; their block references still use
    // caller block numbers and are remapped at the end.
    std::vector<std::pair<unsigned, std::size_t>> callerStmts;
    std::map<std::uint32_t, FirArg> subst;

    for (unsigned b = 1; b <= fn.numBlocks(); ++b) {
      firstPiece[b - 1] = static_cast<unsigned>(out.size());
      out.emplace_back();
      for (const auto &stmt : fn.block(b).statements) {
        auto *inv = stmt.as<Invoke>();
        if (!inv || !needsInlining(fn, *inv)) {
          callerStmts.push_back({static_cast<unsigned>(out.size() - 1), out.back().statements.size()});
          out.back().statements.push_back(stmt);
          continue;
        }
        const FirFunction &callee = inlined(inv->target);
        if (callee.paramTypes.size() != inv->args.size())
          throw InlineError("call to '" + inv->target + "' passes " + std::to_string(inv->args.size()) +
                            " arguments, expected " + std::to_string(callee.paramTypes.size()));
        const unsigned base = static_cast<unsigned>(out.size());
        const unsigned cont = base + static_cast<unsigned>(callee.numBlocks());
        out.back().statements.push_back(FirStatement{0, Goto{base}});

        std::map<std::uint32_t, std::uint32_t> rename;
        for (const auto &cb : callee.blocks)
          for (const auto &cs : cb.statements)
            if (cs.definesValue())
              rename[cs.id] = nextId++;
        auto mapArg = [&](FirArg a) {
          if (a.isParam())
            return inv->args.at(a.ref);
          if (a.isSsa())
            a.ref = rename.at(a.ref);
          return a;
        };

        std::vector<PhiIncoming> returns;
        bool bareReturn = false;
        for (unsigned cbn = 1; cbn <= callee.numBlocks(); ++cbn) {
          FirBlock copy;
          const unsigned self = base + cbn - 1;
          for (const auto &cs : callee.block(cbn).statements) {
            FirStatement ns = cs;
            if (cs.definesValue())
              ns.id = rename.at(cs.id);
            if (auto *ci = ns.as<Invoke>()) {
              for (auto &a : ci->args)
                a = mapArg(a);
            } else if (auto *phi = ns.as<Phi>()) {
              for (auto &in : phi->incomings) {
                in.pred = base + in.pred - 1;
                in.value = mapArg(in.value);
              }
            } else if (auto *g = ns.as<Goto>()) {
              g->target = base + g->target - 1;
            } else if (auto *g = ns.as<GotoIfNot>()) {
              g->target = base + g->target - 1;
              g->cond = mapArg(g->cond);
            } else if (auto *r = ns.as<Return>()) {
              if (r->value)
                returns.push_back({self, mapArg(*r->value)});
              else
                bareReturn = true;
              ns = FirStatement{0, Goto{cont}};
            }
            copy.statements.push_back(std::move(ns));
          }
          out.push_back(std::move(copy));
        }
        if (returns.empty() && !bareReturn)
          throw InlineError("callee '" + inv->target + "' never returns");
        if (!returns.empty() && bareReturn)
          throw InlineError("callee '" + inv->target + "' mixes value and bare returns");

        out.emplace_back(); // continuation
        if (returns.size() == 1) {
          subst[stmt.id] = returns.front().value;
        } else if (returns.size() > 1) {
          out.back().statements.push_back(FirStatement{stmt.id, Phi{returns, inv->type}});
        }
      }
      lastPiece[b - 1] = static_cast<unsigned>(out.size() - 1);
    }

    // Caller branch targets go to the first piece of the target block; phi
    // edges now come from the last piece of the predecessor.
    for (auto [blk, idx] : callerStmts) {
      FirStatement &s = out[blk].statements[idx];
      if (auto *g = s.as<Goto>())
        g->target = firstPiece.at(g->target - 1);
      else if (auto *g = s.as<GotoIfNot>())
        g->target = firstPiece.at(g->target - 1);
      else if (auto *phi = s.as<Phi>())
        for (auto &in : phi->incomings)
          in.pred = lastPiece.at(in.pred - 1);
    }

    auto resolve = [&](FirArg a) {
      for (int guard = 0; a.isSsa() && guard < 1 << 20; ++guard) {
        auto it = subst.find(a.ref);
        if (it == subst.end())
          break;
        a = it->second;
      }
      return a;
    };

    FirFunction result;
    result.name = fn.name;
    result.paramNames = fn.paramNames;
    result.paramTypes = fn.paramTypes;
    for (auto &blk : out) {
      for (auto &s : blk.statements) {
        if (auto *i = s.as<Invoke>()) {
          for (auto &a : i->args)
            a = resolve(a);
        } else if (auto *phi = s.as<Phi>()) {
          for (auto &in : phi->incomings) {
            in.pred += 1;
            in.value = resolve(in.value);
          }
        } else if (auto *g = s.as<Goto>()) {
          g->target += 1;
        } else if (auto *g = s.as<GotoIfNot>()) {
          g->target += 1;
          g->cond = resolve(g->cond);
        } else if (auto *r = s.as<Return>(); r && r->value) {
          r->value = resolve(*r->value);
        }
      }
      result.blocks.push_back(std::move(blk));
    }
    result = normalize(result);
    FirReport report = validateFir(result);
    if (!report.ok())
      throw InlineError("inlining '" + fn.name + "' produced invalid FIR:\n" + report.str());
    return result;
  }

  const FirProgram &program_;
  const IntrinsicPredicate &isIntrinsic_;
  std::map<std::string, FirFunction> done_;
  std::vector<std::string> stack_;
};

} // namespace

FirFunction inlineCalls(const FirProgram &program, std::string_view entry, const IntrinsicPredicate &isIntrinsic) {
  if (!program.contains(entry))
    throw InlineError("no function named '" + std::string(entry) + "'");
  Inliner inliner(program, isIntrinsic);
  return inliner.inlined(std::string(entry));
}

//===----------------------------------------------------------------------===//
// insertBoolConversions
//===----------------------------------------------------------------------===//

FirFunction insertBoolConversions(const FirFunction &fn,
                                  const std::function<bool(const FrontendType &)> &isFrontendBool) {
  FirFunction out = fn;
  std::uint32_t nextId = maxId(fn) + 1;
  bool changed = false;
  for (auto &block : out.blocks) {
    std::vector<FirStatement> stmts;
    stmts.reserve(block.statements.size());
    for (auto &stmt : block.statements) {
      if (auto *g = stmt.as<GotoIfNot>(); g && !isFrontendBool(typeOf(fn, g->cond))) {
        std::uint32_t id = nextId++;
        stmts.push_back(FirStatement{id, Invoke{kBoolConversion, {g->cond}, boolType()}});
        g->cond = FirArg::ssa(id);
        changed = true;
      }
      stmts.push_back(std::move(stmt));
    }
    block.statements = std::move(stmts);
  }
  return changed ? normalize(out) : out;
}

FirFunction insertBoolConversions(const FirFunction &fn) {
  return insertBoolConversions(fn, [](const FrontendType &t) { return t == boolType(); });
}

} // namespace bridgegen::fir
