#include "bridgegen/ir/IR.hpp"

#include <algorithm>

namespace bridgegen::ir {

Block *Value::parentBlock() const {
  if (impl_->block)
    return impl_->block;
  return impl_->op ? impl_->op->parentBlock() : nullptr;
}

unsigned Value::index() const {
  return std::visit([](const auto &o) { return o.index; }, impl_->origin);
}

//===----------------------------------------------------------------------===//
// Operation
//===----------------------------------------------------------------------===//

Operation::Operation(Module &module, std::uint32_t id, std::string name)
    : module_(&module), id_(id), name_(std::move(name)) {}

Operation::~Operation() = default;

std::string_view Operation::dialect() const {
  std::string_view n = name_;
  return n.substr(0, n.find('.'));
}

Value Operation::operand(std::size_t i) const {
  if (i >= operands_.size())
    throw IrError(name_ + ": operand index " + std::to_string(i) + " out of range");
  return operands_[i];
}

void Operation::setOperands(ValueList operands) {
  for (auto v : operands)
    if (!v || v.module() != module_)
      throw IrError(name_ + ": operand does not belong to this module");
  operands_ = std::move(operands);
}

Value Operation::result(std::size_t i) const {
  if (i >= results_.size())
    throw IrError(name_ + " has " + std::to_string(results_.size()) +
                  " result(s); index " + std::to_string(i) + " is out of range");
  return results_[i];
}

const Attribute *Operation::attr(std::string_view name) const {
  auto it = attributes_.find(name);
  return it == attributes_.end() ? nullptr : &it->second;
}

void Operation::setAttr(const std::string &name, Attribute value) {
  attributes_[name] = std::move(value);
}

Region &Operation::region(std::size_t i) {
  if (i >= regions_.size())
    throw IrError(name_ + ": region index out of range");
  return *regions_[i];
}

const Region &Operation::region(std::size_t i) const {
  if (i >= regions_.size())
    throw IrError(name_ + ": region index out of range");
  return *regions_[i];
}

void Operation::setSuccessors(std::vector<Successor> successors) {
  for (const auto &s : successors)
    for (auto v : s.args)
      if (!v || v.module() != module_)
        throw IrError(name_ + ": successor operand does not belong to this module");
  successors_ = std::move(successors);
}

Operation *Operation::parentOp() const {
  if (!parent_ || !parent_->parentRegion())
    return nullptr;
  return parent_->parentRegion()->parentOp();
}

//===----------------------------------------------------------------------===//
// Block / Region
//===----------------------------------------------------------------------===//

Value Block::argument(std::size_t i) const {
  if (i >= args_.size())
    throw IrError("block argument index out of range");
  return args_[i];
}

std::size_t Block::indexOf(const Operation &op) const {
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].get() == &op)
      return i;
  throw IrError("operation " + op.name() + " is not in this block");
}

std::optional<std::size_t> Region::indexOf(const Block &block) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i].get() == &block)
      return i;
  return std::nullopt;
}

//===----------------------------------------------------------------------===//
// Module
//===----------------------------------------------------------------------===//

Module::Module() : body_(new Region(nullptr)) {
  appendBlock(*body_);
  insertBlock_ = &body_->entry();
}

Module::~Module() = default;

ModulePtr Module::create() { return ModulePtr(new Module()); }

void Module::setInsertionPointToEnd(Block &block) {
  insertBlock_ = &block;
  insertIndex_.reset();
}

void Module::setInsertionPoint(Block &block, std::size_t index) {
  if (index > block.ops_.size())
    throw IrError("insertion index out of range");
  insertBlock_ = &block;
  insertIndex_ = index;
}

Value Module::newValue(Type type, ValueOrigin origin, Operation *op, Block *block) {
  auto &impl = values_.emplace_back();
  impl.id = nextValueId_++;
  impl.type = std::move(type);
  impl.origin = origin;
  impl.op = op;
  impl.block = block;
  impl.module = this;
  return Value(&impl);
}

Operation &Module::createOp(const OperationState &state) {
  for (auto v : state.operands)
    if (!v || v.module() != this)
      throw IrError(state.name + ": operand does not belong to this module");
  if (!insertBlock_)
    throw IrError("no insertion point set");

  auto op = std::unique_ptr<Operation>(new Operation(*this, nextOpId_++, state.name));
  op->operands_ = state.operands;
  op->attributes_ = state.attributes;
  for (unsigned i = 0; i < state.numRegions; ++i)
    op->regions_.push_back(std::unique_ptr<Region>(new Region(op.get())));
  op->setSuccessors(state.successors);
  for (unsigned i = 0; i < state.resultTypes.size(); ++i)
    op->results_.push_back(
        newValue(state.resultTypes[i], OpResultRef{op->id_, i}, op.get(), nullptr));

  Operation &ref = *op;
  ref.parent_ = insertBlock_;
  ops_[ref.id_] = &ref;
  auto &list = insertBlock_->ops_;
  if (insertIndex_) {
    list.insert(list.begin() + static_cast<std::ptrdiff_t>(*insertIndex_), std::move(op));
    ++*insertIndex_;
  } else {
    list.push_back(std::move(op));
  }
  return ref;
}

void Module::initBlockArgs(Block &block, const std::vector<Type> &argTypes) {
  for (unsigned i = 0; i < argTypes.size(); ++i)
    block.args_.push_back(newValue(argTypes[i], BlockArgRef{block.id_, i}, nullptr, &block));
  blocks_[block.id_] = &block;
}

Block &Module::appendBlock(Region &region, const std::vector<Type> &argTypes) {
  auto block = std::unique_ptr<Block>(new Block(*this, nextBlockId_++));
  block->parent_ = &region;
  initBlockArgs(*block, argTypes);
  region.blocks_.push_back(std::move(block));
  return *region.blocks_.back();
}

Block &Module::createDetachedBlock(const std::vector<Type> &argTypes) {
  auto block = std::unique_ptr<Block>(new Block(*this, nextBlockId_++));
  initBlockArgs(*block, argTypes);
  detached_.push_back(std::move(block));
  return *detached_.back();
}

Operation *Module::lookupSymbol(std::string_view name) const {
  const Block &top = body_->entry();
  for (std::size_t i = 0; i < top.size(); ++i) {
    const Operation &op = top.op(i);
    const Attribute *sym = op.attr("sym_name");
    if (sym && sym->isString() && sym->text() == name)
      return const_cast<Operation *>(&op);
  }
  return nullptr;
}

Operation *Module::findOp(std::uint32_t id) const {
  auto it = ops_.find(id);
  return it == ops_.end() ? nullptr : it->second;
}

Block *Module::findBlock(std::uint32_t id) const {
  auto it = blocks_.find(id);
  return it == blocks_.end() ? nullptr : it->second;
}

} // namespace bridgegen::ir
