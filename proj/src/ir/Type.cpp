#include "bridgegen/ir/Type.hpp"

#include "bridgegen/Error.hpp"

#include <cctype>
#include <optional>
#include <charconv>
#include <utility>

namespace bridgegen::ir {

Type Type::f32() {
  Type t;
  t.kind_ = Kind::Float;
  t.width_ = 32;
  return t;
}

Type Type::f64() {
  Type t;
  t.kind_ = Kind::Float;
  t.width_ = 64;
  return t;
}

Type Type::integer(unsigned width) {
  switch (width) {
  case 1:
  case 8:
  case 16:
  case 32:
  case 64:
    break;
  default:
    throw Error("invalid integer width " + std::to_string(width));
  }
  Type t;
  t.kind_ = Kind::Integer;
  t.width_ = width;
  return t;
}

Type Type::index() {
  Type t;
  t.kind_ = Kind::Index;
  return t;
}

Type Type::tensor(Type element, std::vector<std::int64_t> dims) {
  if (!element.isScalar())
    throw Error("tensor element must be a scalar, got " + element.str());
  Type t;
  t.kind_ = Kind::Tensor;
  t.element_.push_back(std::move(element));
  t.dims_ = std::move(dims);
  return t;
}

Type Type::memref(Type element, std::vector<std::int64_t> dims) {
  if (!element.isScalar())
    throw Error("memref element must be a scalar, got " + element.str());
  Type t;
  t.kind_ = Kind::MemRef;
  t.element_.push_back(std::move(element));
  t.dims_ = std::move(dims);
  return t;
}

Type Type::dynamicTensor(Type element, unsigned rank) {
  return tensor(std::move(element), std::vector<std::int64_t>(rank, kDynamic));
}

Type Type::dynamicMemRef(Type element, unsigned rank) {
  return memref(std::move(element), std::vector<std::int64_t>(rank, kDynamic));
}

Type Type::function(std::vector<Type> inputs, std::vector<Type> results) {
  Type t;
  t.kind_ = Kind::Function;
  t.inputs_ = std::move(inputs);
  t.results_ = std::move(results);
  return t;
}

const Type &Type::elementType() const {
  if (element_.empty())
    throw Error("type " + str() + " has no element type");
  return element_.front();
}

std::string Type::str() const {
  switch (kind_) {
  case Kind::None:
    return "none";
  case Kind::Float:
    return "f" + std::to_string(width_);
  case Kind::Integer:
    return "i" + std::to_string(width_);
  case Kind::Index:
    return "index";
  case Kind::Tensor:
  case Kind::MemRef: {
    std::string s = kind_ == Kind::Tensor ? "tensor<" : "memref<";
    for (auto d : dims_) {
      s += d == kDynamic ? std::string("?") : std::to_string(d);
      s += 'x';
    }
    s += element_.front().str();
    s += '>';
    return s;
  }
  case Kind::Function: {
    std::string s = "(" + join(inputs_) + ") -> ";
    if (results_.size() == 1 && !results_.front().isFunction())
      s += results_.front().str();
    else
      s += "(" + join(results_) + ")";
    return s;
  }
  }
  return "<invalid>";
}

std::string join(const std::vector<Type> &types, const char *sep) {
  std::string s;
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (i)
      s += sep;
    s += types[i].str();
  }
  return s;
}

namespace {

class TypeParser {
public:
  explicit TypeParser(std::string_view text) : text_(text) {}

  Type parseAll() {
    Type t = parse();
    skipSpace();
    if (pos_ != text_.size())
      fail("trailing characters");
    return t;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw Error("bad type '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool consume(std::string_view s) {
    skipSpace();
    if (text_.substr(pos_, s.size()) != s)
      return false;
    pos_ += s.size();
    return true;
  }
  void expect(std::string_view s) {
    if (!consume(s))
      fail("expected '" + std::string(s) + "'");
  }
  std::string word() {
    skipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  static std::optional<unsigned> widthOf(const std::string &w, char prefix) {
    if (w.size() < 2 || w[0] != prefix)
      return std::nullopt;
    unsigned v = 0;
    auto [p, ec] = std::from_chars(w.data() + 1, w.data() + w.size(), v);
    if (ec != std::errc() || p != w.data() + w.size() || v == 0)
      return std::nullopt;
    return v;
  }

  std::vector<Type> list(char close) {
    std::vector<Type> out;
    skipSpace();
    if (consume(std::string(1, close)))
      return out;
    do
      out.push_back(parse());
    while (consume(","));
    expect(std::string(1, close));
    return out;
  }

  Type shaped(bool tensor) {
    expect("<");
    std::vector<std::int64_t> dims;
    while (true) {
      skipSpace();
      if (consume("?")) {
        dims.push_back(Type::kDynamic);
      } else if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc())
          fail("bad dimension");
        pos_ = static_cast<std::size_t>(p - text_.data());
        dims.push_back(v);
      } else {
        break;
      }
      if (!consume("x"))
        fail("expected 'x' after a dimension");
    }
    Type elem = parse();
    if (!elem.isScalar())
      fail("shaped element must be a scalar type");
    expect(">");
    return tensor ? Type::tensor(elem, dims) : Type::memref(elem, dims);
  }

  Type parse() {
    skipSpace();
    if (consume("(")) {
      std::vector<Type> inputs = list(')');
      expect("->");
      std::vector<Type> results;
      if (consume("("))
        results = list(')');
      else
        results.push_back(parse());
      return Type::function(std::move(inputs), std::move(results));
    }
    std::string w = word();
    if (w == "index")
      return Type::index();
    if (w == "tensor")
      return shaped(true);
    if (w == "memref")
      return shaped(false);
    if (auto width = widthOf(w, 'i'))
      return Type::integer(*width);
    if (w == "f32")
      return Type::f32();
    if (w == "f64")
      return Type::f64();
    fail(w.empty() ? "expected a type" : "unknown type '" + w + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace

Type parseType(std::string_view text) { return TypeParser(text).parseAll(); }

} // namespace bridgegen::ir
