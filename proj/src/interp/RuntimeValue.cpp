#include "bridgegen/interp/Interpreter.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

namespace bridgegen::interp {

std::size_t Buffer::size() const {
  std::size_t n = 1;
  for (auto d : dims)
    n *= static_cast<std::size_t>(d);
  return n;
}

RuntimeValue RuntimeValue::f32(float v) {
  RuntimeValue r;
  r.kind_ = Kind::F32;
  r.f32_ = v;
  r.width_ = 32;
  return r;
}

RuntimeValue RuntimeValue::f64(double v) {
  RuntimeValue r;
  r.kind_ = Kind::F64;
  r.f64_ = v;
  r.width_ = 64;
  return r;
}

RuntimeValue RuntimeValue::integer(unsigned width, std::int64_t v) {
  RuntimeValue r;
  r.kind_ = Kind::Int;
  r.width_ = width;
  r.int_ = ir::wrapInt(v, width);
  return r;
}

RuntimeValue RuntimeValue::index(std::int64_t v) {
  RuntimeValue r;
  r.kind_ = Kind::Index;
  r.int_ = v;
  return r;
}

RuntimeValue RuntimeValue::tensor(std::shared_ptr<Buffer> buffer) {
  RuntimeValue r;
  r.kind_ = Kind::Tensor;
  r.buffer_ = std::move(buffer);
  return r;
}

RuntimeValue RuntimeValue::memref(std::shared_ptr<Buffer> buffer) {
  RuntimeValue r;
  r.kind_ = Kind::MemRef;
  r.buffer_ = std::move(buffer);
  return r;
}

std::shared_ptr<Buffer> RuntimeValue::makeBuffer(ir::Type elementType, std::vector<std::int64_t> dims) {
  if (!elementType.isScalar())
    throw InterpError("buffer element type must be scalar, got " + elementType.str());
  auto b = std::make_shared<Buffer>();
  b->elementType = std::move(elementType);
  for (auto d : dims)
    if (d < 0)
      throw InterpError("buffer extents must be known and non-negative");
  b->dims = std::move(dims);
  if (b->isFloat())
    b->floats.assign(b->size(), 0.0);
  else
    b->ints.assign(b->size(), 0);
  return b;
}

RuntimeValue RuntimeValue::scalar(const ir::Type &type, double value) {
  if (type.isFloat())
    return type.width() == 32 ? f32(static_cast<float>(value)) : f64(value);
  return scalarInt(type, static_cast<std::int64_t>(value));
}

RuntimeValue RuntimeValue::scalarInt(const ir::Type &type, std::int64_t value) {
  if (type.isIndex())
    return index(value);
  if (type.isInteger())
    return integer(type.width(), value);
  if (type.isFloat())
    return scalar(type, static_cast<double>(value));
  throw InterpError("not a scalar type: " + type.str());
}

double RuntimeValue::toDouble() const {
  switch (kind_) {
  case Kind::F32:
    return f32_;
  case Kind::F64:
    return f64_;
  case Kind::Int:
  case Kind::Index:
    return static_cast<double>(int_);
  default:
    throw InterpError("not a scalar value");
  }
}

ir::Type RuntimeValue::type() const {
  switch (kind_) {
  case Kind::F32:
    return ir::Type::f32();
  case Kind::F64:
    return ir::Type::f64();
  case Kind::Int:
    return ir::Type::integer(width_);
  case Kind::Index:
    return ir::Type::index();
  case Kind::Tensor:
    return ir::Type::tensor(buffer_->elementType, buffer_->dims);
  case Kind::MemRef:
    return ir::Type::memref(buffer_->elementType, buffer_->dims);
  }
  return ir::Type::index();
}

bool RuntimeValue::conformsTo(const ir::Type &type) const {
  if (isScalar())
    return this->type() == type;
  if ((kind_ == Kind::Tensor) != type.isTensor() || (kind_ == Kind::MemRef) != type.isMemRef())
    return false;
  if (!(buffer_->elementType == type.elementType()) || buffer_->dims.size() != type.rank())
    return false;
  for (std::size_t i = 0; i < type.rank(); ++i)
    if (type.dims()[i] != ir::Type::kDynamic && type.dims()[i] != buffer_->dims[i])
      return false;
  return true;
}

RuntimeValue RuntimeValue::element(std::size_t flat) const {
  if (!buffer_)
    throw InterpError("element access on a scalar");
  if (flat >= buffer_->size())
    throw InterpError("element " + std::to_string(flat) + " out of range");
  if (buffer_->isFloat())
    return scalar(buffer_->elementType, buffer_->floats[flat]);
  return scalarInt(buffer_->elementType, buffer_->ints[flat]);
}

void RuntimeValue::setElement(std::size_t flat, const RuntimeValue &v) const {
  if (!buffer_)
    throw InterpError("element access on a scalar");
  if (flat >= buffer_->size())
    throw InterpError("element " + std::to_string(flat) + " out of range");
  if (!(v.type() == buffer_->elementType))
    throw InterpError("cannot store " + v.type().str() + " into a buffer of " + buffer_->elementType.str());
  if (buffer_->isFloat())
    buffer_->floats[flat] = v.toDouble();
  else
    buffer_->ints[flat] = v.intValue();
}

namespace {

std::string scalarStr(const RuntimeValue &v) {
  switch (v.kind()) {
  case RuntimeValue::Kind::F32:
    return ir::formatFloat(v.asF32(), 32);
  case RuntimeValue::Kind::F64:
    return ir::formatFloat(v.asF64(), 64);
  case RuntimeValue::Kind::Int:
    if (v.width() == 1)
      return v.intValue() ? "true" : "false";
    return std::to_string(v.intValue());
  default:
    return std::to_string(v.intValue());
  }
}

} // namespace

std::string RuntimeValue::str() const {
  if (isScalar())
    return scalarStr(*this);
  std::string s;
  const auto &dims = buffer_->dims;
  std::size_t flat = 0;
  std::function<void(std::size_t)> emit = [&](std::size_t d) {
    if (d == dims.size()) {
      s += scalarStr(element(flat++));
      return;
    }
    s += "[";
    for (std::int64_t i = 0; i < dims[d]; ++i) {
      if (i)
        s += ", ";
      emit(d + 1);
    }
    s += "]";
  };
  emit(0);
  return s + ":" + buffer_->elementType.str();
}

bool operator==(const RuntimeValue &a, const RuntimeValue &b) {
  if (a.kind_ != b.kind_)
    return false;
  switch (a.kind_) {
  case RuntimeValue::Kind::F32:
    return a.f32_ == b.f32_;
  case RuntimeValue::Kind::F64:
    return a.f64_ == b.f64_;
  case RuntimeValue::Kind::Int:
    return a.width_ == b.width_ && a.int_ == b.int_;
  case RuntimeValue::Kind::Index:
    return a.int_ == b.int_;
  default:
    if (a.buffer_ == b.buffer_)
      return true;
    return a.buffer_->elementType == b.buffer_->elementType && a.buffer_->dims == b.buffer_->dims &&
           a.buffer_->floats == b.buffer_->floats && a.buffer_->ints == b.buffer_->ints;
  }
}

//===----------------------------------------------------------------------===//
// Literal parsing
//===----------------------------------------------------------------------===//

namespace {

struct Literal {
  bool isList = false;
  bool isBool = false;
  bool isFloat = false;
  double f = 0;
  std::int64_t i = 0;
  std::vector<Literal> items;
};

class LiteralParser {
public:
  explicit LiteralParser(std::string_view text) : text_(text) {}

  std::pair<Literal, std::optional<ir::Type>> parse() {
    Literal lit = value();
    std::optional<ir::Type> suffix;
    skip();
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      suffix = scalarType(text_.substr(start, pos_ - start));
    }
    skip();
    if (pos_ != text_.size())
      fail("unexpected trailing text");
    return {std::move(lit), suffix};
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw InterpError("invalid value '" + std::string(text_) + "': " + msg);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  ir::Type scalarType(std::string_view name) const {
    if (name == "f32")
      return ir::Type::f32();
    if (name == "f64")
      return ir::Type::f64();
    if (name == "index")
      return ir::Type::index();
    if (name.size() > 1 && name[0] == 'i') {
      unsigned w = 0;
      auto res = std::from_chars(name.data() + 1, name.data() + name.size(), w);
      if (res.ec == std::errc() && res.ptr == name.data() + name.size()) {
        try {
          return ir::Type::integer(w);
        } catch (const Error &) {
        }
      }
    }
    fail("unknown element type '" + std::string(name) + "'");
  }

  Literal value() {
    skip();
    if (pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      Literal list;
      list.isList = true;
      skip();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return list;
      }
      while (true) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == '[') {
          list.items.push_back(value());
        } else {
          Literal a = number();
          skip();
          if (text_.substr(pos_, 2) == "..") {
            pos_ += 2;
            Literal b = number();
            if (a.isFloat || b.isFloat || a.isBool || b.isBool)
              fail("ranges need integer bounds");
            for (std::int64_t k = a.i; k <= b.i; ++k) {
              Literal e;
              e.i = k;
              e.f = static_cast<double>(k);
              list.items.push_back(e);
            }
          } else {
            list.items.push_back(a);
          }
        }
        skip();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return list;
        }
        fail("expected ',' or ']'");
      }
    }
    return number();
  }

  Literal number() {
    skip();
    Literal lit;
    for (std::string_view word : {"true", "false"})
      if (text_.substr(pos_, word.size()) == word) {
        pos_ += word.size();
        lit.isBool = true;
        lit.i = word == "true";
        lit.f = static_cast<double>(lit.i);
        return lit;
      }
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
      ++pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if ((c == '.' && text_.substr(pos_, 2) != "..") || c == 'e' || c == 'E') {
        lit.isFloat = true;
        ++pos_;
        if ((c == 'e' || c == 'E') && pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
          ++pos_;
      } else {
        break;
      }
    }
    std::string token(text_.substr(start, pos_ - start));
    if (!token.empty() && token[0] == '+')
      token.erase(0, 1);
    if (token.empty() || token == "-")
      fail("expected a number");
    const char *b = token.data();
    const char *e = token.data() + token.size();
    if (lit.isFloat) {
      auto res = std::from_chars(b, e, lit.f);
      if (res.ec != std::errc() || res.ptr != e)
        fail("malformed number '" + token + "'");
    } else {
      auto res = std::from_chars(b, e, lit.i);
      if (res.ec != std::errc() || res.ptr != e)
        fail("malformed number '" + token + "'");
      lit.f = static_cast<double>(lit.i);
    }
    return lit;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

RuntimeValue convertScalar(const Literal &lit, const ir::Type &type) {
  if (lit.isList)
    throw InterpError("expected a scalar of type " + type.str() + ", got a list");
  if (type.isFloat()) {
    if (lit.isBool)
      throw InterpError("booleans are not floats");
    return RuntimeValue::scalar(type, lit.f);
  }
  if (!type.isIntegerLike())
    throw InterpError("expected a scalar type, got " + type.str());
  if (lit.isFloat && lit.f != std::trunc(lit.f))
    throw InterpError("non-integral value for " + type.str());
  std::int64_t v = lit.isFloat ? static_cast<std::int64_t>(lit.f) : lit.i;
  if (lit.isBool && !(type.isInteger() && type.width() == 1))
    throw InterpError("booleans convert only to i1");
  return RuntimeValue::scalarInt(type, v);
}

std::vector<std::int64_t> shapeOf(const Literal &lit) {
  std::vector<std::int64_t> dims;
  for (const Literal *cur = &lit; cur->isList; cur = &cur->items.front()) {
    dims.push_back(static_cast<std::int64_t>(cur->items.size()));
    if (cur->items.empty())
      break;
  }
  return dims;
}

void flatten(const Literal &lit, std::size_t depth, const std::vector<std::int64_t> &dims,
             std::vector<const Literal *> &out) {
  const std::size_t rank = dims.size();
  if (depth == rank) {
    if (lit.isList)
      throw InterpError("ragged nested list");
    out.push_back(&lit);
    return;
  }
  if (!lit.isList || static_cast<std::int64_t>(lit.items.size()) != dims[depth])
    throw InterpError("ragged nested list");
  for (const auto &item : lit.items)
    flatten(item, depth + 1, dims, out);
}

bool anyFloat(const Literal &lit) {
  if (!lit.isList)
    return lit.isFloat;
  for (const auto &i : lit.items)
    if (anyFloat(i))
      return true;
  return false;
}

} // namespace

RuntimeValue parseRuntimeValue(std::string_view text, const ir::Type *expected) {
  auto [lit, suffix] = LiteralParser(text).parse();

  if (!lit.isList) {
    if (expected && expected->isShaped())
      throw InterpError("expected a list for " + expected->str() + ", got '" + std::string(text) + "'");
    ir::Type t = expected ? *expected
                 : suffix ? *suffix
                 : lit.isBool ? ir::Type::integer(1)
                 : lit.isFloat ? ir::Type::f64()
                               : ir::Type::integer(64);
    if (expected && suffix && !(*suffix == *expected))
      throw InterpError("value typed " + suffix->str() + " where " + expected->str() + " is expected");
    return convertScalar(lit, t);
  }

  if (expected && !expected->isShaped())
    throw InterpError("expected a scalar of type " + expected->str() + ", got a list");
  std::vector<std::int64_t> dims = shapeOf(lit);
  ir::Type elem = expected ? expected->elementType()
                  : suffix  ? *suffix
                  : anyFloat(lit) ? ir::Type::f64()
                                  : ir::Type::integer(64);
  if (expected && suffix && !(*suffix == elem))
    throw InterpError("list typed " + suffix->str() + " where " + expected->str() + " is expected");
  if (expected) {
    if (expected->rank() != dims.size())
      throw InterpError("list of rank " + std::to_string(dims.size()) + " where " + expected->str() +
                        " is expected");
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (expected->dims()[i] != ir::Type::kDynamic && expected->dims()[i] != dims[i])
        throw InterpError("list extent " + std::to_string(dims[i]) + " does not match " + expected->str());
  }
  std::vector<const Literal *> flat;
  flatten(lit, 0, dims, flat);
  auto buffer = RuntimeValue::makeBuffer(elem, dims);
  RuntimeValue v = expected && expected->isMemRef() ? RuntimeValue::memref(buffer) : RuntimeValue::tensor(buffer);
  for (std::size_t i = 0; i < flat.size(); ++i)
    v.setElement(i, convertScalar(*flat[i], elem));
  return v;
}

} // namespace bridgegen::interp
