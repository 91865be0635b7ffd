#pragma once

#include "bridgegen/Error.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bridgegen::fir {

/// Semantic type of the frontend language. Concrete types may carry
/// parameters, which are either types or integers (`tensor{f32,2}`).
class FrontendType {
public:
  enum class Kind { Concrete, Abstract, Any, IntParam };

  FrontendType() = default;

  static FrontendType concrete(std::string name, std::vector<FrontendType> params = {});
  static FrontendType abstract(std::string name);
  static FrontendType any();
  /// Integer type parameter, valid only inside a parameter list.
  static FrontendType intParam(std::int64_t value);

  Kind kind() const { return kind_; }
  bool isConcrete() const { return kind_ == Kind::Concrete; }
  bool isAbstract() const { return kind_ == Kind::Abstract; }
  bool isAny() const { return kind_ == Kind::Any; }
  bool isIntParam() const { return kind_ == Kind::IntParam; }

  const std::string &name() const { return name_; }
  const std::vector<FrontendType> &params() const { return params_; }
  std::int64_t intValue() const { return value_; }

  std::string str() const;

  friend bool operator==(const FrontendType &, const FrontendType &) = default;
  friend bool operator<(const FrontendType &a, const FrontendType &b) { return a.str() < b.str(); }

private:
  Kind kind_ = Kind::Any;
  std::string name_ = "Any";
  std::vector<FrontendType> params_;
  std::int64_t value_ = 0;
};

using FrontendTypes = std::vector<FrontendType>;

std::string join(const FrontendTypes &types);

/// Nominal subtype lattice. Every abstract and concrete name has exactly one
/// parent, which is an abstract name or Any. Concrete names not declared
/// explicitly have Any as parent.
class TypeLattice {
public:
  TypeLattice() = default;

  /// Number > Real > {AbstractFloat, Integer}, with f32/f64 under
  /// AbstractFloat; i1..i64, index and Bool under Integer; Complex under
  /// Number; tensor and memref under AbstractArray; Nothing under Any.
  static TypeLattice standard();

  void addAbstract(const std::string &name, const std::string &parent = "Any");
  void addConcrete(const std::string &name, const std::string &parent = "Any");

  bool isAbstractName(std::string_view name) const;
  /// Chain of abstract supertypes of a type, nearest first, ending in Any.
  std::vector<std::string> ancestors(const FrontendType &type) const;
  bool isSubtype(const FrontendType &sub, const FrontendType &super) const;

  /// Parses `name`, `name{p, ...}`, `Any`. Names declared abstract become
  /// abstract types; everything else is concrete.
  FrontendType parse(std::string_view text) const;
  /// Splits a comma-separated list at the top nesting level and parses each.
  FrontendTypes parseList(std::string_view text) const;

private:
  std::map<std::string, std::string, std::less<>> abstractParent_;
  std::map<std::string, std::string, std::less<>> concreteParent_;
};

/// Types given to literal arguments: i64 for integers, f64 for floats and
/// Bool for booleans.
FrontendType naturalIntType();
FrontendType naturalFloatType();
FrontendType boolType();
FrontendType nothingType();

} // namespace bridgegen::fir
