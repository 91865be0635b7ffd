#include "bridgegen/ir/Verifier.hpp"

#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace bridgegen::ir {

const char *categoryName(DiagCategory category) {
  switch (category) {
  case DiagCategory::MissingTerminator:
    return "missing-terminator";
  case DiagCategory::MisplacedTerminator:
    return "misplaced-terminator";
  case DiagCategory::Dominance:
    return "dominance";
  case DiagCategory::Arity:
    return "arity";
  case DiagCategory::TypeConstraint:
    return "type-constraint";
  case DiagCategory::MissingAttribute:
    return "missing-attribute";
  case DiagCategory::UnknownOp:
    return "unknown-op";
  case DiagCategory::BadSuccessor:
    return "bad-successor";
  case DiagCategory::RegionCount:
    return "region-count";
  case DiagCategory::DuplicateSymbol:
    return "duplicate-symbol";
  case DiagCategory::Structure:
    return "structure";
  }
  return "unknown";
}

std::string Diagnostic::str() const {
  std::string s = "error[";
  s += categoryName(category);
  s += "]";
  if (!opName.empty())
    s += " '" + opName + "'";
  s += " in block #" + std::to_string(blockId) + ": " + message;
  return s;
}

bool VerificationReport::has(DiagCategory category) const {
  for (const auto &d : diagnostics)
    if (d.category == category)
      return true;
  return false;
}

std::string VerificationReport::str() const {
  std::string s;
  for (const auto &d : diagnostics)
    s += d.str() + "\n";
  return s;
}

namespace {

std::vector<std::size_t> successorIndices(const Region &region, const Block &block) {
  std::vector<std::size_t> out;
  const Operation *term = block.back();
  if (!term)
    return out;
  for (const auto &s : term->successors())
    if (s.block)
      if (auto idx = region.indexOf(*s.block))
        out.push_back(*idx);
  return out;
}

} // namespace

std::vector<std::optional<std::size_t>> computeDominators(const Region &region) {
  const std::size_t n = region.size();
  std::vector<std::optional<std::size_t>> idom(n);
  if (n == 0)
    return idom;

  std::vector<std::vector<std::size_t>> succs(n), preds(n);
  for (std::size_t b = 0; b < n; ++b) {
    succs[b] = successorIndices(region, region.block(b));
    for (auto s : succs[b])
      preds[s].push_back(b);
  }

  // Reverse post-order from the entry.
  std::vector<std::size_t> postorder;
  std::vector<bool> seen(n, false);
  std::function<void(std::size_t)> dfs = [&](std::size_t b) {
    seen[b] = true;
    for (auto s : succs[b])
      if (!seen[s])
        dfs(s);
    postorder.push_back(b);
  };
  dfs(0);
  std::vector<std::size_t> rpoNumber(n, 0);
  for (std::size_t i = 0; i < postorder.size(); ++i)
    rpoNumber[postorder[i]] = postorder.size() - 1 - i;

  auto intersect = [&](std::size_t a, std::size_t b) {
    while (a != b) {
      while (rpoNumber[a] > rpoNumber[b])
        a = *idom[a];
      while (rpoNumber[b] > rpoNumber[a])
        b = *idom[b];
    }
    return a;
  };

  idom[0] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = postorder.rbegin(); it != postorder.rend(); ++it) {
      std::size_t b = *it;
      if (b == 0)
        continue;
      std::optional<std::size_t> candidate;
      for (auto p : preds[b]) {
        if (!idom[p])
          continue;
        candidate = candidate ? intersect(*candidate, p) : p;
      }
      if (candidate && idom[b] != candidate) {
        idom[b] = candidate;
        changed = true;
      }
    }
  }
  return idom;
}

namespace {

class Verifier {
public:
  Verifier(const OpInfoProvider *ops) : ops_(ops) {}

  VerificationReport run(const Module &module) {
    std::set<std::string> symbols;
    const Block &top = module.topBlock();
    for (std::size_t i = 0; i < top.size(); ++i) {
      const Operation &op = top.op(i);
      if (const Attribute *sym = op.attr("sym_name"); sym && sym->isString())
        if (!symbols.insert(sym->text()).second)
          emit(DiagCategory::DuplicateSymbol, op, "symbol @" + sym->text() + " is already defined");
      verifyOp(op);
    }
    return std::move(report_);
  }

private:
  void emit(DiagCategory category, const Operation &op, std::string message) {
    report_.diagnostics.push_back(
        {category, op.name(), op.parentBlock() ? op.parentBlock()->id() : 0, std::move(message)});
  }

  void emitBlock(DiagCategory category, const Block &block, std::string message) {
    report_.diagnostics.push_back({category, "", block.id(), std::move(message)});
  }

  bool isTerminator(const Operation &op) const {
    if (ops_ && ops_->knowsOp(op.name()))
      return ops_->isTerminator(op.name());
    if (!op.successors().empty())
      return true;
    const auto &n = op.name();
    auto endsWith = [&](std::string_view suffix) {
      return n.size() >= suffix.size() && n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return endsWith(".return") || endsWith(".yield");
  }

  void verifyOp(const Operation &op) {
    if (ops_) {
      if (!ops_->knowsOp(op.name()))
        emit(DiagCategory::UnknownOp, op, "operation '" + op.name() + "' is not registered");
      else
        ops_->checkOp(op, report_.diagnostics);
    }

    for (std::size_t i = 0; i < op.numResults(); ++i) {
      const auto *ref = std::get_if<OpResultRef>(&op.results()[i].origin());
      if (!ref || ref->opId != op.id() || ref->index != i)
        emit(DiagCategory::Structure, op, "result " + std::to_string(i) + " does not point back to its op");
    }

    if (!op.successors().empty() && !isTerminator(op))
      emit(DiagCategory::BadSuccessor, op, "only terminators may have successors");

    const Block *parent = op.parentBlock();
    for (std::size_t s = 0; s < op.successors().size(); ++s) {
      const Successor &succ = op.successors()[s];
      const std::string which = "successor #" + std::to_string(s);
      if (!succ.block) {
        emit(DiagCategory::BadSuccessor, op, which + " is null");
        continue;
      }
      if (!parent || !parent->parentRegion() || succ.block->parentRegion() != parent->parentRegion() ||
          !parent->parentRegion()->indexOf(*succ.block)) {
        emit(DiagCategory::BadSuccessor, op,
             which + " (block #" + std::to_string(succ.block->id()) + ") is not a block of the enclosing region");
        continue;
      }
      if (parent->parentRegion()->indexOf(*succ.block) == 0)
        emit(DiagCategory::BadSuccessor, op, which + " targets the entry block");
      if (succ.args.size() != succ.block->numArguments()) {
        emit(DiagCategory::BadSuccessor, op,
             which + " passes " + std::to_string(succ.args.size()) + " value(s) to a block with " +
                 std::to_string(succ.block->numArguments()) + " argument(s)");
        continue;
      }
      for (std::size_t a = 0; a < succ.args.size(); ++a)
        if (succ.args[a].type() != succ.block->argument(a).type())
          emit(DiagCategory::BadSuccessor, op,
               which + " argument " + std::to_string(a) + " has type " + succ.args[a].type().str() +
                   ", block expects " + succ.block->argument(a).type().str());
    }

    for (auto v : op.operands())
      checkUse(v, op);
    for (const auto &succ : op.successors())
      for (auto v : succ.args)
        checkUse(v, op);

    for (std::size_t r = 0; r < op.numRegions(); ++r)
      verifyRegion(op.region(r));
  }

  void verifyRegion(const Region &region) {
    for (std::size_t b = 0; b < region.size(); ++b) {
      const Block &block = region.block(b);
      if (block.empty()) {
        emitBlock(DiagCategory::MissingTerminator, block, "empty block has no terminator");
        continue;
      }
      for (std::size_t i = 0; i < block.size(); ++i) {
        const Operation &op = block.op(i);
        bool last = i + 1 == block.size();
        bool term = isTerminator(op);
        if (last && !term)
          emit(DiagCategory::MissingTerminator, op, "block does not end in a terminator (missing terminator)");
        if (!last && term)
          emit(DiagCategory::MisplacedTerminator, op, "terminator is not the last operation of its block");
        verifyOp(op);
      }
    }
  }

  const std::vector<std::optional<std::size_t>> &dominators(const Region &region) {
    auto it = domCache_.find(&region);
    if (it == domCache_.end())
      it = domCache_.emplace(&region, computeDominators(region)).first;
    return it->second;
  }

  void checkUse(Value v, const Operation &user) {
    if (!v) {
      emit(DiagCategory::Dominance, user, "null operand");
      return;
    }
    const Block *defBlock = v.parentBlock();
    const Region *defRegion = defBlock ? defBlock->parentRegion() : nullptr;
    if (!defRegion) {
      emit(DiagCategory::Dominance, user, "operand %" + std::to_string(v.id()) + " is defined outside any region");
      return;
    }
    // Hoist the user to the ancestor living in the defining region.
    const Operation *anchor = &user;
    while (anchor && anchor->parentBlock() && anchor->parentBlock()->parentRegion() != defRegion)
      anchor = anchor->parentBlock()->parentRegion() ? anchor->parentOp() : nullptr;
    if (!anchor || !anchor->parentBlock()) {
      emit(DiagCategory::Dominance, user,
           "operand %" + std::to_string(v.id()) + " is defined in a region that does not enclose its use");
      return;
    }
    const Block *useBlock = anchor->parentBlock();
    auto defIdx = *defRegion->indexOf(*defBlock);
    auto useIdx = *defRegion->indexOf(*useBlock);
    const auto &idom = dominators(*defRegion);
    if (!idom[useIdx])
      return; // uses in unreachable blocks are not constrained

    if (!v.isBlockArgument() && defBlock == useBlock) {
      if (useBlock->indexOf(*v.definingOp()) >= useBlock->indexOf(*anchor))
        emit(DiagCategory::Dominance, user,
             "operand %" + std::to_string(v.id()) + " is used before its definition (does not dominate its use)");
      return;
    }
    if (v.isBlockArgument() && defBlock == useBlock)
      return;
    std::size_t b = useIdx;
    while (b != 0 && b != defIdx)
      b = *idom[b];
    if (b != defIdx)
      emit(DiagCategory::Dominance, user,
           "operand %" + std::to_string(v.id()) + " defined in block #" + std::to_string(defBlock->id()) +
               " does not dominate its use in block #" + std::to_string(useBlock->id()));
  }

  const OpInfoProvider *ops_;
  VerificationReport report_;
  std::unordered_map<const Region *, std::vector<std::optional<std::size_t>>> domCache_;
};

} // namespace

VerificationReport verifyModule(const Module &module, const OpInfoProvider *ops) {
  return Verifier(ops).run(module);
}

} // namespace bridgegen::ir
