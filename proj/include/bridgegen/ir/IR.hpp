//===- IR.hpp - Operations, blocks, regions and modules ------------------===//
//
// In-memory IR in the MLIR style. A Module owns a top-level region whose
// single block holds symbol-defining operations. Operations own regions,
// regions own blocks, blocks own operations. SSA values are either operation
// results or block arguments and are owned by the module.
//
// Modules are not movable: values keep a back pointer to their module so that
// cross-module operands can be rejected. Use ModulePtr.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "bridgegen/Error.hpp"
#include "bridgegen/ir/Attribute.hpp"
#include "bridgegen/ir/Type.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace bridgegen::ir {

class Block;
class Module;
class Operation;
class Region;

class IrError : public Error {
public:
  using Error::Error;
};

struct OpResultRef {
  std::uint32_t opId;
  unsigned index;
  friend bool operator==(const OpResultRef &, const OpResultRef &) = default;
};

struct BlockArgRef {
  std::uint32_t blockId;
  unsigned index;
  friend bool operator==(const BlockArgRef &, const BlockArgRef &) = default;
};

using ValueOrigin = std::variant<OpResultRef, BlockArgRef>;

namespace detail {
struct ValueImpl {
  std::uint32_t id;
  Type type;
  ValueOrigin origin;
  Operation *op = nullptr;
  Block *block = nullptr;
  const Module *module = nullptr;
};
} // namespace detail

/// Handle to an SSA value. Cheap to copy; compares by identity.
class Value {
public:
  Value() = default;
  explicit Value(detail::ValueImpl *impl) : impl_(impl) {}

  std::uint32_t id() const { return impl_->id; }
  const Type &type() const { return impl_->type; }
  const ValueOrigin &origin() const { return impl_->origin; }
  bool isBlockArgument() const { return std::holds_alternative<BlockArgRef>(impl_->origin); }
  /// Defining operation, or null for block arguments.
  Operation *definingOp() const { return impl_->op; }
  /// Block holding the definition: the owner block of an argument or the
  /// parent block of the defining operation.
  Block *parentBlock() const;
  /// Result index or argument index.
  unsigned index() const;
  const Module *module() const { return impl_->module; }

  explicit operator bool() const { return impl_ != nullptr; }
  friend bool operator==(Value a, Value b) { return a.impl_ == b.impl_; }

  struct Hash {
    std::size_t operator()(Value v) const { return std::hash<const void *>()(v.impl_); }
  };

private:
  detail::ValueImpl *impl_ = nullptr;
};

using ValueList = std::vector<Value>;

struct Successor {
  Block *block = nullptr;
  ValueList args;
};

/// Everything needed to create an operation. Regions are created empty and
/// filled afterwards through Module::appendBlock.
struct OperationState {
  std::string name;
  ValueList operands;
  std::vector<Type> resultTypes;
  AttrMap attributes;
  unsigned numRegions = 0;
  std::vector<Successor> successors;
};

class Operation {
public:
  Operation(const Operation &) = delete;
  Operation &operator=(const Operation &) = delete;
  ~Operation();

  std::uint32_t id() const { return id_; }
  const std::string &name() const { return name_; }
  /// Prefix of the qualified name up to the first '.'.
  std::string_view dialect() const;

  const ValueList &operands() const { return operands_; }
  Value operand(std::size_t i) const;
  std::size_t numOperands() const { return operands_.size(); }
  void setOperands(ValueList operands);

  const ValueList &results() const { return results_; }
  /// Throws IrError when `i` is out of range.
  Value result(std::size_t i = 0) const;
  std::size_t numResults() const { return results_.size(); }

  const AttrMap &attributes() const { return attributes_; }
  const Attribute *attr(std::string_view name) const;
  void setAttr(const std::string &name, Attribute value);

  std::size_t numRegions() const { return regions_.size(); }
  Region &region(std::size_t i);
  const Region &region(std::size_t i) const;

  const std::vector<Successor> &successors() const { return successors_; }
  void setSuccessors(std::vector<Successor> successors);

  Block *parentBlock() const { return parent_; }
  /// Operation owning the region that holds this operation, if any.
  Operation *parentOp() const;
  Module &module() const { return *module_; }

private:
  friend class Module;
  Operation(Module &module, std::uint32_t id, std::string name);

  Module *module_;
  std::uint32_t id_;
  std::string name_;
  ValueList operands_;
  ValueList results_;
  AttrMap attributes_;
  std::vector<std::unique_ptr<Region>> regions_;
  std::vector<Successor> successors_;
  Block *parent_ = nullptr;
};

class Block {
public:
  Block(const Block &) = delete;
  Block &operator=(const Block &) = delete;

  std::uint32_t id() const { return id_; }
  const ValueList &arguments() const { return args_; }
  Value argument(std::size_t i) const;
  std::size_t numArguments() const { return args_.size(); }

  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }
  Operation &op(std::size_t i) { return *ops_.at(i); }
  const Operation &op(std::size_t i) const { return *ops_.at(i); }
  /// Last operation, or null for an empty block.
  Operation *back() const { return ops_.empty() ? nullptr : ops_.back().get(); }
  std::size_t indexOf(const Operation &op) const;

  /// Owning region; null for detached blocks.
  Region *parentRegion() const { return parent_; }
  Module &module() const { return *module_; }

  template <typename Fn> void forEachOp(Fn &&fn) const {
    for (const auto &op : ops_)
      fn(*op);
  }

private:
  friend class Module;
  Block(Module &module, std::uint32_t id) : module_(&module), id_(id) {}

  Module *module_;
  std::uint32_t id_;
  ValueList args_;
  std::vector<std::unique_ptr<Operation>> ops_;
  Region *parent_ = nullptr;
};

class Region {
public:
  Region(const Region &) = delete;
  Region &operator=(const Region &) = delete;

  bool empty() const { return blocks_.empty(); }
  std::size_t size() const { return blocks_.size(); }
  Block &block(std::size_t i) { return *blocks_.at(i); }
  const Block &block(std::size_t i) const { return *blocks_.at(i); }
  Block &entry() { return block(0); }
  const Block &entry() const { return block(0); }
  /// Position of `block` in this region, or nullopt if it lives elsewhere.
  std::optional<std::size_t> indexOf(const Block &block) const;

  /// Operation owning this region; null for the module body.
  Operation *parentOp() const { return parent_; }

private:
  friend class Module;
  friend class Operation;
  explicit Region(Operation *parent) : parent_(parent) {}

  std::vector<std::unique_ptr<Block>> blocks_;
  Operation *parent_;
};

class Module;
using ModulePtr = std::unique_ptr<Module>;

class Module {
public:
  static ModulePtr create();
  Module(const Module &) = delete;
  Module &operator=(const Module &) = delete;
  ~Module();

  Region &body() { return *body_; }
  const Region &body() const { return *body_; }
  /// The block holding symbol operations such as func.func.
  Block &topBlock() { return body_->entry(); }
  const Block &topBlock() const { return body_->entry(); }

  /// Insertion point used by createOp. Defaults to the end of topBlock().
  void setInsertionPointToEnd(Block &block);
  /// Insert before position `index` of `block`; advances after each insert.
  void setInsertionPoint(Block &block, std::size_t index);
  Block *insertionBlock() const { return insertBlock_; }

  /// Allocates the operation with fresh results and inserts it at the
  /// current insertion point. Throws IrError for operands owned by another
  /// module. Successor blocks are checked only by the verifier.
  Operation &createOp(const OperationState &state);

  /// Appends a block with fresh arguments of the given types to `region`.
  Block &appendBlock(Region &region, const std::vector<Type> &argTypes = {});
  /// A block owned by the module but not placed in any region.
  Block &createDetachedBlock(const std::vector<Type> &argTypes = {});

  /// func.func (or other symbol op) whose sym_name equals `name`.
  Operation *lookupSymbol(std::string_view name) const;

  Operation *findOp(std::uint32_t id) const;
  Block *findBlock(std::uint32_t id) const;

private:
  Module();
  Value newValue(Type type, ValueOrigin origin, Operation *op, Block *block);
  void initBlockArgs(Block &block, const std::vector<Type> &argTypes);

  std::deque<detail::ValueImpl> values_;
  std::uint32_t nextValueId_ = 0;
  std::uint32_t nextOpId_ = 0;
  std::uint32_t nextBlockId_ = 0;
  std::unordered_map<std::uint32_t, Operation *> ops_;
  std::unordered_map<std::uint32_t, Block *> blocks_;
  std::unique_ptr<Region> body_;
  std::vector<std::unique_ptr<Block>> detached_;
  Block *insertBlock_ = nullptr;
  std::optional<std::size_t> insertIndex_;
};

} // namespace bridgegen::ir
