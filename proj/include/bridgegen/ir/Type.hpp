//===- Type.hpp - IR types -----------------------------------------------===//
//
// Value types of the IR: scalar floats/integers/index, ranked shaped types and
// function types. Types are plain values compared structurally.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bridgegen::ir {

class Type {
public:
  enum class Kind : std::uint8_t { None, Float, Integer, Index, Tensor, MemRef, Function };

  /// Extent marker for a dimension whose size is only known at run time.
  static constexpr std::int64_t kDynamic = -1;

  Type() = default;

  static Type f32();
  static Type f64();
  /// Throws bridgegen::Error unless width is one of 1, 8, 16, 32, 64.
  static Type integer(unsigned width);
  static Type index();
  static Type tensor(Type element, std::vector<std::int64_t> dims);
  static Type memref(Type element, std::vector<std::int64_t> dims);
  /// Shaped type of the given rank with every dimension dynamic.
  static Type dynamicTensor(Type element, unsigned rank);
  static Type dynamicMemRef(Type element, unsigned rank);
  static Type function(std::vector<Type> inputs, std::vector<Type> results);

  Kind kind() const { return kind_; }
  bool isNone() const { return kind_ == Kind::None; }
  bool isFloat() const { return kind_ == Kind::Float; }
  bool isInteger() const { return kind_ == Kind::Integer; }
  bool isIndex() const { return kind_ == Kind::Index; }
  /// Integers and index; the operand class of integer arithmetic.
  bool isIntegerLike() const { return isInteger() || isIndex(); }
  bool isScalar() const { return isFloat() || isIntegerLike(); }
  bool isTensor() const { return kind_ == Kind::Tensor; }
  bool isMemRef() const { return kind_ == Kind::MemRef; }
  bool isShaped() const { return isTensor() || isMemRef(); }
  bool isFunction() const { return kind_ == Kind::Function; }

  /// Bit width of Float/Integer types.
  unsigned width() const { return width_; }
  const Type &elementType() const;
  const std::vector<std::int64_t> &dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  const std::vector<Type> &inputs() const { return inputs_; }
  const std::vector<Type> &results() const { return results_; }

  std::string str() const;

  friend bool operator==(const Type &, const Type &) = default;

private:
  Kind kind_ = Kind::None;
  unsigned width_ = 0;
  // Shaped types keep their element as a one-element vector.
  std::vector<Type> element_;
  std::vector<std::int64_t> dims_;
  std::vector<Type> inputs_;
  std::vector<Type> results_;
};

std::string join(const std::vector<Type> &types, const char *sep = ", ");

/// Inverse of Type::str: `i32`, `f64`, `index`, `tensor<?x4xf32>`,
/// `memref<?xf32>`, `(i64, i64) -> i64`, `() -> ()`. Throws Error.
Type parseType(std::string_view text);

} // namespace bridgegen::ir
