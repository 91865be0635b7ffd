#include "bridgegen/ir/Attribute.hpp"

#include "bridgegen/Error.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <utility>

namespace bridgegen::ir {

std::string IndexMap::str() const {
  std::string s = "affine_map<(";
  for (unsigned d = 0; d < numDims; ++d) {
    if (d)
      s += ", ";
    s += "d" + std::to_string(d);
  }
  s += ") -> (";
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i)
      s += ", ";
    s += "d" + std::to_string(results[i]);
  }
  return s + ")>";
}

std::int64_t wrapInt(std::int64_t value, unsigned width) {
  if (width >= 64)
    return value;
  auto bits = static_cast<std::uint64_t>(value) & ((std::uint64_t{1} << width) - 1);
  if (width == 1)
    return static_cast<std::int64_t>(bits);
  if (bits & (std::uint64_t{1} << (width - 1)))
    bits |= ~((std::uint64_t{1} << width) - 1);
  return static_cast<std::int64_t>(bits);
}

Attribute Attribute::floatAttr(double value, Type type) {
  if (!type.isFloat())
    throw Error("float attribute requires a float type, got " + type.str());
  Attribute a;
  a.kind_ = Kind::Float;
  a.float_ = type.width() == 32 ? static_cast<double>(static_cast<float>(value)) : value;
  a.type_ = std::move(type);
  return a;
}

Attribute Attribute::intAttr(std::int64_t value, Type type) {
  if (!type.isIntegerLike())
    throw Error("integer attribute requires an integer type, got " + type.str());
  Attribute a;
  a.kind_ = Kind::Integer;
  a.int_ = type.isIndex() ? value : wrapInt(value, type.width());
  a.type_ = std::move(type);
  return a;
}

Attribute Attribute::string(std::string text) {
  Attribute a;
  a.kind_ = Kind::String;
  a.text_ = std::move(text);
  return a;
}

Attribute Attribute::array(std::vector<Attribute> elements) {
  Attribute a;
  a.kind_ = Kind::Array;
  a.elements_ = std::move(elements);
  return a;
}

Attribute Attribute::indexMap(IndexMap map) {
  for (auto r : map.results)
    if (r >= map.numDims)
      throw Error("index map result d" + std::to_string(r) + " out of range");
  Attribute a;
  a.kind_ = Kind::IndexMap;
  a.map_ = std::move(map);
  return a;
}

Attribute Attribute::symbol(std::string name) {
  Attribute a;
  a.kind_ = Kind::Symbol;
  a.text_ = std::move(name);
  return a;
}

Attribute Attribute::type(Type type) {
  Attribute a;
  a.kind_ = Kind::Type;
  a.type_ = std::move(type);
  return a;
}

std::string formatFloat(double value, unsigned width) {
  if (!std::isfinite(value)) {
    // Non-finite values use the bit-pattern spelling.
    char buf[32];
    if (width == 32) {
      float f = static_cast<float>(value);
      std::uint32_t bits;
      std::memcpy(&bits, &f, sizeof bits);
      std::snprintf(buf, sizeof buf, "0x%08X", bits);
    } else {
      std::uint64_t bits;
      std::memcpy(&bits, &value, sizeof bits);
      std::snprintf(buf, sizeof buf, "0x%016llX", static_cast<unsigned long long>(bits));
    }
    return buf;
  }
  char buf[400];
  std::to_chars_result res;
  if (width == 32)
    res = std::to_chars(buf, buf + sizeof buf, static_cast<float>(value), std::chars_format::fixed);
  else
    res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos)
    s += ".0";
  return s;
}

std::string formatInt(std::int64_t value, const Type &type) {
  if (type.isInteger() && type.width() == 1)
    return value ? "true" : "false";
  return std::to_string(value);
}

static std::string quote(const std::string &text) {
  std::string s = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\')
      s += '\\';
    s += c;
  }
  return s + '"';
}

std::string Attribute::valueStr() const {
  switch (kind_) {
  case Kind::Float:
    return formatFloat(float_, type_.width());
  case Kind::Integer:
    return formatInt(int_, type_);
  default:
    return str();
  }
}

std::string Attribute::str() const {
  switch (kind_) {
  case Kind::Float:
  case Kind::Integer:
    if (type_.isInteger() && type_.width() == 1)
      return valueStr();
    return valueStr() + " : " + type_.str();
  case Kind::String:
    return quote(text_);
  case Kind::Array: {
    std::string s = "[";
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (i)
        s += ", ";
      s += elements_[i].str();
    }
    return s + "]";
  }
  case Kind::IndexMap:
    return map_.str();
  case Kind::Symbol:
    return "@" + text_;
  case Kind::Type:
    return type_.str();
  }
  return {};
}

} // namespace bridgegen::ir
