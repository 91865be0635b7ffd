//===- Interpreter.hpp - Reference evaluator for generated IR ------------===//
//
// Executes func.func symbols op by op. Floats follow IEEE-754 at their
// declared width (f32 math is done in float), integers wrap at their width.
// linalg.generic runs its full loop nest in lexicographic axis order. Kernels
// using gpu id ops run once per simulated thread, sequentially.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "bridgegen/Error.hpp"
#include "bridgegen/ir/IR.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bridgegen::interp {

class InterpError : public Error {
public:
  using Error::Error;
};

/// Row-major element storage. Float element types use `floats`, integer and
/// index element types use `ints`.
struct Buffer {
  ir::Type elementType;
  std::vector<std::int64_t> dims;
  std::vector<double> floats;
  std::vector<std::int64_t> ints;

  std::size_t size() const;
  bool isFloat() const { return elementType.isFloat(); }
};

class RuntimeValue {
public:
  enum class Kind { F32, F64, Int, Index, Tensor, MemRef };

  RuntimeValue() = default;
  static RuntimeValue f32(float v);
  static RuntimeValue f64(double v);
  /// Wrapped to `width` bits (two's complement; i1 holds 0 or 1).
  static RuntimeValue integer(unsigned width, std::int64_t v);
  static RuntimeValue index(std::int64_t v);
  /// Tensors are values: operations that "modify" them produce new buffers.
  static RuntimeValue tensor(std::shared_ptr<Buffer> buffer);
  /// Memrefs share their buffer; stores are visible to every holder.
  static RuntimeValue memref(std::shared_ptr<Buffer> buffer);
  /// Fresh zero-filled buffer.
  static std::shared_ptr<Buffer> makeBuffer(ir::Type elementType, std::vector<std::int64_t> dims);

  /// Scalar of an IR scalar type from a double or integer payload.
  static RuntimeValue scalar(const ir::Type &type, double value);
  static RuntimeValue scalarInt(const ir::Type &type, std::int64_t value);

  Kind kind() const { return kind_; }
  bool isScalar() const { return kind_ != Kind::Tensor && kind_ != Kind::MemRef; }
  bool isFloat() const { return kind_ == Kind::F32 || kind_ == Kind::F64; }
  float asF32() const { return f32_; }
  double asF64() const { return f64_; }
  /// Integer payload of Int/Index values.
  std::int64_t intValue() const { return int_; }
  unsigned width() const { return width_; }
  /// Any scalar as a double.
  double toDouble() const;
  const std::shared_ptr<Buffer> &buffer() const { return buffer_; }

  /// IR type; shaped values report their static dims.
  ir::Type type() const;
  /// True when the value can be passed where `type` is expected (dynamic
  /// dims accept any extent).
  bool conformsTo(const ir::Type &type) const;

  /// Element `flat` of a shaped value as a scalar.
  RuntimeValue element(std::size_t flat) const;
  void setElement(std::size_t flat, const RuntimeValue &v) const;

  /// `0.5`, `7`, `true`, `[[1.0, 2.0], [3.0, 4.0]]:f32`.
  std::string str() const;

  /// Same kind, width and payload; shaped values compare contents.
  friend bool operator==(const RuntimeValue &a, const RuntimeValue &b);

private:
  Kind kind_ = Kind::Index;
  float f32_ = 0;
  double f64_ = 0;
  std::int64_t int_ = 0;
  unsigned width_ = 64;
  std::shared_ptr<Buffer> buffer_;
};

struct LaunchConfig {
  std::array<std::int64_t, 3> grid{1, 1, 1};
  std::array<std::int64_t, 3> block{1, 1, 1};
};

struct Options {
  std::uint64_t stepLimit = 10'000'000;
  /// Run simulated threads in reverse order.
  bool reverseThreadOrder = false;
};

std::vector<RuntimeValue> runFunction(const ir::Module &module, std::string_view symbol,
                                      const std::vector<RuntimeValue> &inputs, const Options &options = {});

/// Runs `symbol` once per (block, thread) coordinate, x fastest, blocks
/// outermost. Returns the inputs, whose memref buffers carry the stores.
std::vector<RuntimeValue> runKernel(const ir::Module &module, std::string_view symbol, const LaunchConfig &launch,
                                    const std::vector<RuntimeValue> &inputs, const Options &options = {});

/// True when the function (or anything it calls) uses gpu id ops.
bool usesGpuIds(const ir::Module &module, std::string_view symbol);

/// Parses `2.0`, `7`, `true`, `3:i32`, `[1,2,3]:f32`, `[[1,2],[3,4]]`,
/// `[1..8]:f32` (inclusive integer range). With `expected`, the literal is
/// converted to that type and lists become memrefs or tensors accordingly;
/// without it, lists become tensors and untyped scalars take i64/f64/i1.
RuntimeValue parseRuntimeValue(std::string_view text, const ir::Type *expected = nullptr);

} // namespace bridgegen::interp
