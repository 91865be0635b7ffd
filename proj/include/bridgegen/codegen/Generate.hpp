//===- Generate.hpp - FIR to IR translation ------------------------------===//
//
// The translator walks a FIR function statement by statement. Invokes are
// dispatched to intrinsic builders, phis become block arguments of blocks
// created up front (one per reachable FIR block), and terminators go through
// the registry's control-flow hooks. Literals become arith.constant ops in
// the entry block, deduplicated by (value, type).
//
//===----------------------------------------------------------------------===//
#pragma once

#include "bridgegen/codegen/Intrinsics.hpp"
#include "bridgegen/fir/Fir.hpp"

#include <map>
#include <memory>

namespace bridgegen::codegen {

/// Constants shared by a translation and its nested regions.
struct ConstantPool {
  ir::Block *block = nullptr;
  std::size_t insertIndex = 0;
  std::map<std::pair<std::string, std::string>, ir::Value> cache;
};

class BuilderContext {
public:
  BuilderContext(ir::Module &module, const IntrinsicRegistry &registry, std::shared_ptr<ConstantPool> pool,
                 const fir::FirFunction *function = nullptr);

  ir::Module &module() const { return module_; }
  const IntrinsicRegistry &registry() const { return registry_; }
  const fir::FirFunction *function() const { return function_; }

  /// Builds a registered op at the end of the current block.
  ir::Operation &build(std::string_view name, dialects::OpArgs args);
  /// Builds a single-result op and returns the result.
  ir::Value build1(std::string_view name, ir::ValueList operands, ir::AttrMap attributes = {});

  ir::Block *currentBlock() const { return current_; }
  void setCurrentBlock(ir::Block *block);

  /// Entry-block constant for `literal` converted to `type`, created once per
  /// (value, type). Throws CodegenError when the literal is not representable.
  ir::Value materializeConstant(const fir::FirArg &literal, const FrontendType &type);
  /// Same for an already typed attribute (`1.0 : f32`).
  ir::Value materializeConstant(const ir::Attribute &value);

  /// FIR block number -> IR block, for reachable blocks.
  std::map<unsigned, ir::Block *> &blocks() { return blocks_; }
  ir::Block *blockFor(unsigned firBlock) const;
  /// FIR SSA id -> IR values (one per unpacked component).
  std::map<std::uint32_t, ir::ValueList> &bindings() { return bindings_; }
  std::vector<ir::ValueList> &paramBindings() { return params_; }
  /// Values of a non-literal FIR argument.
  const ir::ValueList &valuesOf(const fir::FirArg &arg) const;

  /// Pending phi bookkeeping: per FIR block, the phis at its head with their
  /// incoming arguments and the index of their first block argument.
  struct PendingPhi {
    std::uint32_t id;
    const fir::Phi *phi;
    std::size_t firstArg;
    std::size_t numArgs;
  };
  std::map<unsigned, std::vector<PendingPhi>> &pendingPhis() { return phis_; }

  const std::shared_ptr<ConstantPool> &constantPool() const { return pool_; }

private:
  ir::Module &module_;
  const IntrinsicRegistry &registry_;
  std::shared_ptr<ConstantPool> pool_;
  const fir::FirFunction *function_;
  ir::Block *current_ = nullptr;
  std::map<unsigned, ir::Block *> blocks_;
  std::map<std::uint32_t, ir::ValueList> bindings_;
  std::vector<ir::ValueList> params_;
  std::map<unsigned, std::vector<PendingPhi>> phis_;
};

/// A finished translation together with the FIR-to-IR maps, for inspection.
struct Translation {
  ir::ModulePtr module;
  ir::Operation *function = nullptr;
  std::map<unsigned, ir::Block *> blocks;
  std::map<std::uint32_t, ir::ValueList> values;
};

/// Translates a validated, fully inlined FIR function with bool conversions
/// inserted into a module holding one func.func symbol. `argTypes` must be
/// subtypes of the declared parameter types and replace them for dispatch.
Translation generateDetailed(const IntrinsicRegistry &registry, const fir::FirFunction &fn,
                             const FrontendTypes &argTypes);
ir::ModulePtr generate(const IntrinsicRegistry &registry, const fir::FirFunction &fn, const FrontendTypes &argTypes);

/// Emits `fn` into the empty `region`, whose entry block takes the unpacked
/// `argTypes`. Return statements call `returnHook` (e.g. to build a
/// linalg.yield). Constants go to the parent's constant pool.
void generateRegion(BuilderContext &parent, ir::Region &region, const fir::FirFunction &fn,
                    const FrontendTypes &argTypes, const IntrinsicRegistry::ReturnHook &returnHook);

} // namespace bridgegen::codegen
