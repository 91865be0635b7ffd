#pragma once

#include "bridgegen/ir/Type.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace bridgegen::ir {

/// Maps iteration-space axes d0..d{numDims-1} to operand dimensions:
/// operand dimension k reads axis results[k].
struct IndexMap {
  unsigned numDims = 0;
  std::vector<unsigned> results;

  std::string str() const;
  friend bool operator==(const IndexMap &, const IndexMap &) = default;
};

class Attribute {
public:
  enum class Kind { Float, Integer, String, Array, IndexMap, Symbol, Type };

  Attribute() = default;

  /// `type` must be a float type; the value is rounded to it.
  static Attribute floatAttr(double value, Type type);
  /// `type` must be integer-like; the value is wrapped to its width.
  static Attribute intAttr(std::int64_t value, Type type);
  static Attribute string(std::string text);
  static Attribute array(std::vector<Attribute> elements);
  static Attribute indexMap(IndexMap map);
  static Attribute symbol(std::string name);
  static Attribute type(Type type);

  Kind kind() const { return kind_; }
  bool isFloat() const { return kind_ == Kind::Float; }
  bool isInteger() const { return kind_ == Kind::Integer; }
  bool isString() const { return kind_ == Kind::String; }
  bool isArray() const { return kind_ == Kind::Array; }
  bool isIndexMap() const { return kind_ == Kind::IndexMap; }
  bool isSymbol() const { return kind_ == Kind::Symbol; }
  bool isType() const { return kind_ == Kind::Type; }
  /// Float or integer attribute carrying a scalar type.
  bool isTyped() const { return isFloat() || isInteger(); }

  double floatValue() const { return float_; }
  std::int64_t intValue() const { return int_; }
  /// String text or symbol name.
  const std::string &text() const { return text_; }
  const std::vector<Attribute> &elements() const { return elements_; }
  const IndexMap &indexMapValue() const { return map_; }
  /// Scalar type of typed attributes, or the payload of a TypeAttr.
  const Type &typeValue() const { return type_; }

  /// Textual form as it appears in an attribute dictionary.
  std::string str() const;
  /// Value without the trailing ": type" suffix (typed attributes only).
  std::string valueStr() const;

  friend bool operator==(const Attribute &, const Attribute &) = default;

private:
  Kind kind_ = Kind::String;
  double float_ = 0;
  std::int64_t int_ = 0;
  std::string text_;
  std::vector<Attribute> elements_;
  IndexMap map_;
  Type type_;
};

using AttrMap = std::map<std::string, Attribute, std::less<>>;

/// Shortest round-trip decimal in positional notation, always with a
/// fractional part ("1.0", "0.5", "0.88079706").
std::string formatFloat(double value, unsigned width);
std::string formatInt(std::int64_t value, const Type &type);

/// Two's complement wrap of `value` to `width` bits. i1 is kept as 0/1.
std::int64_t wrapInt(std::int64_t value, unsigned width);

} // namespace bridgegen::ir
