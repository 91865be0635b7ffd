#include "bridgegen/fir/FrontendType.hpp"

#include <cctype>

namespace bridgegen::fir {

FrontendType FrontendType::concrete(std::string name, std::vector<FrontendType> params) {
  FrontendType t;
  t.kind_ = Kind::Concrete;
  t.name_ = std::move(name);
  t.params_ = std::move(params);
  return t;
}

FrontendType FrontendType::abstract(std::string name) {
  FrontendType t;
  t.kind_ = Kind::Abstract;
  t.name_ = std::move(name);
  return t;
}

FrontendType FrontendType::any() { return FrontendType(); }

FrontendType FrontendType::intParam(std::int64_t value) {
  FrontendType t;
  t.kind_ = Kind::IntParam;
  t.name_.clear();
  t.value_ = value;
  return t;
}

std::string FrontendType::str() const {
  if (kind_ == Kind::IntParam)
    return std::to_string(value_);
  if (params_.empty())
    return name_;
  std::string s = name_ + "{";
  for (std::size_t i = 0; i < params_.size(); ++i)
    s += (i ? "," : "") + params_[i].str();
  return s + "}";
}

std::string join(const FrontendTypes &types) {
  std::string s;
  for (std::size_t i = 0; i < types.size(); ++i)
    s += (i ? ", " : "") + types[i].str();
  return s;
}

FrontendType naturalIntType() { return FrontendType::concrete("i64"); }
FrontendType naturalFloatType() { return FrontendType::concrete("f64"); }
FrontendType boolType() { return FrontendType::concrete("Bool"); }
FrontendType nothingType() { return FrontendType::concrete("Nothing"); }

TypeLattice TypeLattice::standard() {
  TypeLattice l;
  l.addAbstract("Number");
  l.addAbstract("Real", "Number");
  l.addAbstract("AbstractFloat", "Real");
  l.addAbstract("Integer", "Real");
  l.addAbstract("AbstractArray");
  for (const char *f : {"f32", "f64"})
    l.addConcrete(f, "AbstractFloat");
  for (const char *i : {"i1", "i8", "i16", "i32", "i64", "index", "Bool"})
    l.addConcrete(i, "Integer");
  l.addConcrete("Complex", "Number");
  l.addConcrete("tensor", "AbstractArray");
  l.addConcrete("memref", "AbstractArray");
  l.addConcrete("Nothing", "Any");
  return l;
}

void TypeLattice::addAbstract(const std::string &name, const std::string &parent) {
  if (name == "Any" || concreteParent_.count(name))
    throw Error("cannot declare '" + name + "' as an abstract type");
  if (parent != "Any" && !abstractParent_.count(parent))
    throw Error("unknown abstract parent '" + parent + "'");
  abstractParent_[name] = parent;
}

void TypeLattice::addConcrete(const std::string &name, const std::string &parent) {
  if (name == "Any" || abstractParent_.count(name))
    throw Error("cannot declare '" + name + "' as a concrete type");
  if (parent != "Any" && !abstractParent_.count(parent))
    throw Error("unknown abstract parent '" + parent + "'");
  concreteParent_[name] = parent;
}

bool TypeLattice::isAbstractName(std::string_view name) const {
  return abstractParent_.find(name) != abstractParent_.end();
}

std::vector<std::string> TypeLattice::ancestors(const FrontendType &type) const {
  std::vector<std::string> chain;
  if (type.isAny() || type.isIntParam())
    return chain;
  std::string cur;
  if (type.isConcrete()) {
    auto it = concreteParent_.find(type.name());
    cur = it == concreteParent_.end() ? "Any" : it->second;
  } else {
    auto it = abstractParent_.find(type.name());
    cur = it == abstractParent_.end() ? "Any" : it->second;
  }
  while (cur != "Any") {
    chain.push_back(cur);
    cur = abstractParent_.at(cur);
  }
  chain.push_back("Any");
  return chain;
}

bool TypeLattice::isSubtype(const FrontendType &sub, const FrontendType &super) const {
  if (super.isAny() || sub == super)
    return true;
  if (!super.isAbstract() || sub.isAny())
    return false;
  for (const auto &a : ancestors(sub))
    if (a == super.name())
      return true;
  return false;
}

namespace {

class TypeParser {
public:
  TypeParser(std::string_view text, const TypeLattice &lattice) : text_(text), lattice_(lattice) {}

  FrontendType parseTop() {
    FrontendType t = parseType();
    skipSpace();
    if (pos_ != text_.size())
      fail("unexpected trailing characters");
    return t;
  }

private:
  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string &msg) {
    throw Error("invalid type '" + std::string(text_) + "': " + msg);
  }

  FrontendType parseType() {
    skipSpace();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      return FrontendType::intParam(std::stoll(std::string(text_.substr(start, pos_ - start))));
    }
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name.empty())
      fail("expected a type name");
    std::vector<FrontendType> params;
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == '{') {
      ++pos_;
      while (true) {
        params.push_back(parseType());
        skipSpace();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < text_.size() && text_[pos_] == '}') {
          ++pos_;
          break;
        }
        fail("expected ',' or '}'");
      }
    }
    if (name == "Any") {
      if (!params.empty())
        fail("Any takes no parameters");
      return FrontendType::any();
    }
    if (lattice_.isAbstractName(name)) {
      if (!params.empty())
        fail("abstract types take no parameters");
      return FrontendType::abstract(name);
    }
    return FrontendType::concrete(name, std::move(params));
  }

  std::string_view text_;
  const TypeLattice &lattice_;
  std::size_t pos_ = 0;
};

} // namespace

FrontendType TypeLattice::parse(std::string_view text) const { return TypeParser(text, *this).parseTop(); }

FrontendTypes TypeLattice::parseList(std::string_view text) const {
  FrontendTypes out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '{')
      ++depth;
    else if (i < text.size() && text[i] == '}')
      --depth;
    else if (i == text.size() || (text[i] == ',' && depth == 0)) {
      auto piece = text.substr(start, i - start);
      if (piece.find_first_not_of(" \t") != std::string_view::npos)
        out.push_back(parse(piece));
      else if (i < text.size() || !out.empty())
        throw Error("empty entry in type list '" + std::string(text) + "'");
      start = i + 1;
    }
  }
  return out;
}

} // namespace bridgegen::fir
