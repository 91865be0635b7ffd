#include "bridgegen/dialects/Dialect.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace bridgegen::dialects {

//===----------------------------------------------------------------------===//
// Constraints and attribute kinds
//===----------------------------------------------------------------------===//

static std::optional<unsigned> parseRef(std::string_view text, std::string_view prefix) {
  if (text.size() <= prefix.size() + 1 || text.substr(0, prefix.size()) != prefix || text.back() != ')')
    return std::nullopt;
  auto digits = text.substr(prefix.size(), text.size() - prefix.size() - 1);
  if (digits.empty())
    return std::nullopt;
  unsigned v = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return std::nullopt;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  return v;
}

TypeConstraint TypeConstraint::parse(std::string_view text) {
  TypeConstraint c;
  if (text == "AnyFloat")
    c.kind = Kind::AnyFloat;
  else if (text == "AnyInteger")
    c.kind = Kind::AnyInteger;
  else if (text == "AnyTensor")
    c.kind = Kind::AnyTensor;
  else if (text == "AnyMemRef")
    c.kind = Kind::AnyMemRef;
  else if (text == "Any")
    c.kind = Kind::Any;
  else if (text == "f32" || text == "f64" || text == "index") {
    c.kind = Kind::Exact;
    c.exact = text == "f32" ? ir::Type::f32() : text == "f64" ? ir::Type::f64() : ir::Type::index();
  } else if (text == "i1" || text == "i8" || text == "i16" || text == "i32" || text == "i64") {
    c.kind = Kind::Exact;
    c.exact = ir::Type::integer(static_cast<unsigned>(std::stoul(std::string(text.substr(1)))));
  } else if (auto k = parseRef(text, "same(")) {
    c.kind = Kind::SameAs;
    c.ref = *k;
  } else if (auto k = parseRef(text, "elem(")) {
    c.kind = Kind::ElementOf;
    c.ref = *k;
  } else {
    throw DialectError("unknown type constraint '" + std::string(text) + "'");
  }
  return c;
}

std::string TypeConstraint::str() const {
  switch (kind) {
  case Kind::Exact:
    return exact.str();
  case Kind::AnyFloat:
    return "AnyFloat";
  case Kind::AnyInteger:
    return "AnyInteger";
  case Kind::AnyTensor:
    return "AnyTensor";
  case Kind::AnyMemRef:
    return "AnyMemRef";
  case Kind::Any:
    return "Any";
  case Kind::SameAs:
    return "same(" + std::to_string(ref) + ")";
  case Kind::ElementOf:
    return "elem(" + std::to_string(ref) + ")";
  }
  return "Any";
}

std::string AttrSpec::kindStr() const {
  switch (kind) {
  case AttrKind::Float:
    return "float";
  case AttrKind::Int:
    return "int";
  case AttrKind::Typed:
    return "typed";
  case AttrKind::String:
    return "string";
  case AttrKind::Array:
    return "array";
  case AttrKind::IndexMap:
    return "index_map";
  case AttrKind::Symbol:
    return "symbol";
  case AttrKind::Type:
    return "type";
  case AttrKind::Enum: {
    std::string s = "enum(";
    for (std::size_t i = 0; i < enumerants.size(); ++i)
      s += (i ? "|" : "") + enumerants[i];
    return s + ")";
  }
  }
  return "string";
}

static AttrSpec parseAttrKind(std::string_view text) {
  AttrSpec spec;
  static const std::map<std::string_view, AttrKind> simple = {
      {"float", AttrKind::Float},   {"int", AttrKind::Int},           {"typed", AttrKind::Typed},
      {"string", AttrKind::String}, {"array", AttrKind::Array},       {"index_map", AttrKind::IndexMap},
      {"symbol", AttrKind::Symbol}, {"type", AttrKind::Type}};
  if (auto it = simple.find(text); it != simple.end()) {
    spec.kind = it->second;
    return spec;
  }
  if (text.substr(0, 5) == "enum(" && text.back() == ')') {
    spec.kind = AttrKind::Enum;
    auto body = text.substr(5, text.size() - 6);
    std::size_t start = 0;
    while (start <= body.size()) {
      auto bar = body.find('|', start);
      auto item = body.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
      if (item.empty())
        throw DialectError("empty enumerant in '" + std::string(text) + "'");
      spec.enumerants.emplace_back(item);
      if (bar == std::string_view::npos)
        break;
      start = bar + 1;
    }
    return spec;
  }
  throw DialectError("unknown attribute kind '" + std::string(text) + "'");
}

const AttrSpec *OpDefinition::attrSpec(std::string_view attr) const {
  for (const auto &a : attributes)
    if (a.name == attr)
      return &a;
  return nullptr;
}

const OpDefinition *DialectDefinition::lookup(std::string_view shortName) const {
  for (const auto &op : ops)
    if (op.name == shortName)
      return &op;
  return nullptr;
}

//===----------------------------------------------------------------------===//
// Spec loading
//===----------------------------------------------------------------------===//

namespace {

struct LineTokens {
  std::vector<std::string> words;
  std::optional<std::string> quoted;
};

LineTokens tokenize(std::string_view line, unsigned lineNo) {
  LineTokens out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#')
      break;
    if (c == '"') {
      if (out.quoted)
        throw SpecParseError(lineNo, "more than one docstring");
      std::string s;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          s += line[i + 1];
          i += 2;
          continue;
        }
        if (line[i] == '"') {
          closed = true;
          ++i;
          break;
        }
        s += line[i++];
      }
      if (!closed)
        throw SpecParseError(lineNo, "unterminated docstring");
      out.quoted = std::move(s);
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '"')
      ++i;
    out.words.emplace_back(line.substr(start, i - start));
  }
  return out;
}

bool isIdentifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

unsigned parseCount(const std::string &text, unsigned lineNo) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw SpecParseError(lineNo, "expected a count, got '" + text + "'");
  return static_cast<unsigned>(std::stoul(text));
}

void finishOp(const OpDefinition &op, unsigned lineNo) {
  auto checkVariadic = [&](const std::vector<ValueSpec> &specs, const char *what) {
    unsigned n = 0;
    for (const auto &s : specs)
      n += s.variadic ? 1 : 0;
    if (n > 1)
      throw SpecParseError(lineNo, "op '" + op.name + "' has more than one variadic " + what);
  };
  checkVariadic(op.operands, "operand");
  checkVariadic(op.results, "result");
  for (std::size_t i = 0; i < op.operands.size(); ++i) {
    const auto &c = op.operands[i].constraint;
    if (c.kind == TypeConstraint::Kind::SameAs && c.ref >= i)
      throw SpecParseError(lineNo, "op '" + op.name + "': operand '" + op.operands[i].name + "' uses same(" +
                                       std::to_string(c.ref) + ") which does not name an earlier operand");
    if (c.kind == TypeConstraint::Kind::ElementOf && (c.ref >= op.operands.size() || c.ref == i))
      throw SpecParseError(lineNo, "op '" + op.name + "': operand '" + op.operands[i].name + "' uses elem(" +
                                       std::to_string(c.ref) + ") which does not name another operand");
  }
  for (const auto &r : op.results) {
    const auto &c = r.constraint;
    if ((c.kind == TypeConstraint::Kind::SameAs || c.kind == TypeConstraint::Kind::ElementOf) &&
        c.ref >= op.operands.size())
      throw SpecParseError(lineNo, "op '" + op.name + "': result '" + r.name + "' references operand " +
                                       std::to_string(c.ref) + " which does not exist");
  }
}

} // namespace

DialectDefinition loadDialectSpec(std::string_view text) {
  DialectDefinition dialect;
  bool haveHeader = false;
  OpDefinition *current = nullptr;
  unsigned currentLine = 0;
  std::set<std::string> opNames;

  unsigned lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineNo;

    LineTokens tok = tokenize(line, lineNo);
    if (tok.words.empty()) {
      if (tok.quoted)
        throw SpecParseError(lineNo, "stray docstring");
      continue;
    }
    const auto &w = tok.words;
    const std::string &kw = w[0];

    try {
      if (kw == "dialect") {
        if (haveHeader)
          throw SpecParseError(lineNo, "duplicate dialect header");
        if (w.size() != 2 || !isIdentifier(w[1]))
          throw SpecParseError(lineNo, "expected 'dialect <name>'");
        dialect.name = w[1];
        haveHeader = true;
        continue;
      }
      if (!haveHeader)
        throw SpecParseError(lineNo, "expected 'dialect <name>' header first");

      if (kw == "op") {
        if (current)
          finishOp(*current, currentLine);
        if (w.size() != 2 || !isIdentifier(w[1]))
          throw SpecParseError(lineNo, "expected 'op <name> \"docstring\"'");
        if (!opNames.insert(w[1]).second)
          throw SpecParseError(lineNo, "duplicate op name '" + w[1] + "'");
        OpDefinition op;
        op.dialect = dialect.name;
        op.name = w[1];
        op.doc = tok.quoted.value_or("");
        dialect.ops.push_back(std::move(op));
        current = &dialect.ops.back();
        currentLine = lineNo;
        continue;
      }

      if (!current)
        throw SpecParseError(lineNo, "'" + kw + "' outside of an op");
      if (tok.quoted)
        throw SpecParseError(lineNo, "unexpected docstring");

      if (kw == "operand" || kw == "result") {
        if (w.size() < 3 || w.size() > 4 || !isIdentifier(w[1]) || (w.size() == 4 && w[3] != "variadic"))
          throw SpecParseError(lineNo, "expected '" + kw + " <name> <constraint> [variadic]'");
        ValueSpec spec{w[1], TypeConstraint::parse(w[2]), w.size() == 4};
        (kw == "operand" ? current->operands : current->results).push_back(std::move(spec));
      } else if (kw == "attr") {
        if (w.size() < 3 || w.size() > 4 || !isIdentifier(w[1]) || (w.size() == 4 && w[3] != "required"))
          throw SpecParseError(lineNo, "expected 'attr <name> <kind> [required]'");
        AttrSpec spec = parseAttrKind(w[2]);
        spec.name = w[1];
        spec.required = w.size() == 4;
        if (current->attrSpec(spec.name))
          throw SpecParseError(lineNo, "duplicate attribute '" + spec.name + "'");
        current->attributes.push_back(std::move(spec));
      } else if (kw == "regions") {
        if (w.size() != 2)
          throw SpecParseError(lineNo, "expected 'regions <n>'");
        current->numRegions = parseCount(w[1], lineNo);
      } else if (kw == "terminator") {
        current->terminator = true;
        if (w.size() == 1) {
          current->numSuccessors = 0;
        } else if (w.size() == 3 && w[1] == "successors") {
          if (w[2] == "variadic")
            current->numSuccessors = std::nullopt;
          else
            current->numSuccessors = parseCount(w[2], lineNo);
        } else {
          throw SpecParseError(lineNo, "expected 'terminator [successors <n|variadic>]'");
        }
      } else {
        throw SpecParseError(lineNo, "unknown keyword '" + kw + "'");
      }
    } catch (const SpecParseError &) {
      throw;
    } catch (const Error &e) {
      throw SpecParseError(lineNo, e.what());
    }
  }
  if (current)
    finishOp(*current, currentLine);
  if (!haveHeader)
    throw SpecParseError(lineNo, "missing 'dialect <name>' header");
  return dialect;
}

std::string serializeDialect(const DialectDefinition &dialect) {
  std::ostringstream os;
  os << "dialect " << dialect.name << "\n";
  for (const auto &op : dialect.ops) {
    os << "\nop " << op.name << " \"";
    for (char c : op.doc) {
      if (c == '"' || c == '\\')
        os << '\\';
      os << c;
    }
    os << "\"\n";
    for (const auto &o : op.operands)
      os << "  operand " << o.name << " " << o.constraint.str() << (o.variadic ? " variadic" : "") << "\n";
    for (const auto &r : op.results)
      os << "  result " << r.name << " " << r.constraint.str() << (r.variadic ? " variadic" : "") << "\n";
    for (const auto &a : op.attributes)
      os << "  attr " << a.name << " " << a.kindStr() << (a.required ? " required" : "") << "\n";
    if (op.numRegions)
      os << "  regions " << op.numRegions << "\n";
    if (op.terminator) {
      os << "  terminator";
      if (!op.numSuccessors)
        os << " successors variadic";
      else if (*op.numSuccessors)
        os << " successors " << *op.numSuccessors;
      os << "\n";
    }
  }
  return os.str();
}

//===----------------------------------------------------------------------===//
// Definition checks
//===----------------------------------------------------------------------===//

namespace {

struct Range {
  std::size_t begin = 0, end = 0;
  bool empty() const { return begin == end; }
};

/// Splits `count` values among `specs`; nullopt on an arity mismatch.
std::optional<std::vector<Range>> groupValues(const std::vector<ValueSpec> &specs, std::size_t count) {
  std::size_t fixed = 0;
  bool hasVariadic = false;
  for (const auto &s : specs) {
    if (s.variadic)
      hasVariadic = true;
    else
      ++fixed;
  }
  if (hasVariadic ? count < fixed : count != fixed)
    return std::nullopt;
  std::vector<Range> ranges;
  std::size_t pos = 0;
  for (const auto &s : specs) {
    std::size_t n = s.variadic ? count - fixed : 1;
    ranges.push_back({pos, pos + n});
    pos += n;
  }
  return ranges;
}

std::string arityStr(const std::vector<ValueSpec> &specs) {
  std::size_t fixed = 0;
  bool variadic = false;
  for (const auto &s : specs)
    s.variadic ? (void)(variadic = true) : (void)++fixed;
  return (variadic ? "at least " : "") + std::to_string(fixed);
}

/// Empty string when satisfied, otherwise the reason.
std::string checkConstraint(const TypeConstraint &c, const ir::Type &t, const std::vector<ir::Type> &operandTypes,
                            const std::vector<Range> &operandGroups, const std::vector<ValueSpec> &operandSpecs) {
  using K = TypeConstraint::Kind;
  switch (c.kind) {
  case K::Exact:
    return t == c.exact ? "" : "expected " + c.exact.str();
  case K::AnyFloat:
    return t.isFloat() ? "" : "expected AnyFloat";
  case K::AnyInteger:
    return t.isIntegerLike() ? "" : "expected AnyInteger";
  case K::AnyTensor:
    return t.isTensor() ? "" : "expected AnyTensor";
  case K::AnyMemRef:
    return t.isMemRef() ? "" : "expected AnyMemRef";
  case K::Any:
    return "";
  case K::SameAs:
  case K::ElementOf: {
    if (c.ref >= operandGroups.size() || operandGroups[c.ref].empty())
      return "";
    const ir::Type &other = operandTypes[operandGroups[c.ref].begin];
    const std::string &otherName = operandSpecs[c.ref].name;
    if (c.kind == K::SameAs)
      return t == other ? "" : "expected same type as operand '" + otherName + "' (" + other.str() + ")";
    if (!other.isShaped())
      return "operand '" + otherName + "' is not shaped (" + other.str() + ")";
    return t == other.elementType()
               ? ""
               : "expected element type of operand '" + otherName + "' (" + other.elementType().str() + ")";
  }
  }
  return "";
}

bool attrMatches(const AttrSpec &spec, const ir::Attribute &attr) {
  switch (spec.kind) {
  case AttrKind::Float:
    return attr.isFloat();
  case AttrKind::Int:
    return attr.isInteger();
  case AttrKind::Typed:
    return attr.isTyped();
  case AttrKind::String:
    return attr.isString();
  case AttrKind::Array:
    return attr.isArray();
  case AttrKind::IndexMap:
    return attr.isIndexMap();
  case AttrKind::Symbol:
    return attr.isSymbol();
  case AttrKind::Type:
    return attr.isType();
  case AttrKind::Enum:
    if (!attr.isString())
      return false;
    for (const auto &e : spec.enumerants)
      if (e == attr.text())
        return true;
    return false;
  }
  return false;
}

} // namespace

void checkAgainstDefinition(const OpDefinition &def, const std::vector<ir::Type> &operandTypes,
                            const std::vector<ir::Type> &resultTypes, const ir::AttrMap &attributes,
                            std::size_t numRegions, std::size_t numSuccessors, const ir::Operation *,
                            std::uint32_t blockId, std::vector<ir::Diagnostic> &out) {
  using ir::DiagCategory;
  const std::string name = def.qualifiedName();
  auto emit = [&](DiagCategory cat, std::string msg) { out.push_back({cat, name, blockId, std::move(msg)}); };

  auto operandGroups = groupValues(def.operands, operandTypes.size());
  if (!operandGroups) {
    emit(DiagCategory::Arity, "expected " + arityStr(def.operands) + " operand(s), got " +
                                  std::to_string(operandTypes.size()) + " (arity mismatch)");
  } else {
    for (std::size_t s = 0; s < def.operands.size(); ++s)
      for (std::size_t i = (*operandGroups)[s].begin; i < (*operandGroups)[s].end; ++i) {
        auto why = checkConstraint(def.operands[s].constraint, operandTypes[i], operandTypes, *operandGroups,
                                   def.operands);
        if (!why.empty())
          emit(DiagCategory::TypeConstraint,
               "operand '" + def.operands[s].name + "' has type " + operandTypes[i].str() + ": " + why);
      }
  }

  auto resultGroups = groupValues(def.results, resultTypes.size());
  if (!resultGroups) {
    emit(DiagCategory::Arity, "expected " + arityStr(def.results) + " result(s), got " +
                                  std::to_string(resultTypes.size()) + " (arity mismatch)");
  } else if (operandGroups) {
    for (std::size_t s = 0; s < def.results.size(); ++s)
      for (std::size_t i = (*resultGroups)[s].begin; i < (*resultGroups)[s].end; ++i) {
        auto why =
            checkConstraint(def.results[s].constraint, resultTypes[i], operandTypes, *operandGroups, def.operands);
        if (!why.empty())
          emit(DiagCategory::TypeConstraint,
               "result '" + def.results[s].name + "' has type " + resultTypes[i].str() + ": " + why);
      }
  }

  for (const auto &spec : def.attributes) {
    auto it = attributes.find(spec.name);
    if (it == attributes.end()) {
      if (spec.required)
        emit(DiagCategory::MissingAttribute, "missing required attribute '" + spec.name + "'");
      continue;
    }
    if (!attrMatches(spec, it->second))
      emit(DiagCategory::TypeConstraint,
           "attribute '" + spec.name + "' = " + it->second.str() + " is not a valid " + spec.kindStr());
  }

  if (numRegions != def.numRegions)
    emit(DiagCategory::RegionCount, "expected " + std::to_string(def.numRegions) + " region(s), got " +
                                        std::to_string(numRegions));

  if (!def.terminator && numSuccessors)
    emit(DiagCategory::BadSuccessor, "non-terminator op has successors");
  else if (def.terminator && def.numSuccessors && *def.numSuccessors != numSuccessors)
    emit(DiagCategory::BadSuccessor, "expected " + std::to_string(*def.numSuccessors) + " successor(s), got " +
                                         std::to_string(numSuccessors));
}

std::vector<ir::Type> inferResultTypes(const OpDefinition &def, const ir::ValueList &operands,
                                       const ir::AttrMap &attributes) {
  auto groups = groupValues(def.operands, operands.size());
  if (!groups)
    throw DialectError(def.qualifiedName() + ": expected " + arityStr(def.operands) + " operand(s), got " +
                       std::to_string(operands.size()));
  std::vector<ir::Type> types;
  for (const auto &r : def.results) {
    if (r.variadic)
      continue;
    const auto &c = r.constraint;
    switch (c.kind) {
    case TypeConstraint::Kind::Exact:
      types.push_back(c.exact);
      break;
    case TypeConstraint::Kind::SameAs:
    case TypeConstraint::Kind::ElementOf: {
      if ((*groups)[c.ref].empty())
        throw DialectError(def.qualifiedName() + ": cannot infer type of result '" + r.name +
                           "' from an empty operand group");
      const ir::Type &t = operands[(*groups)[c.ref].begin].type();
      if (c.kind == TypeConstraint::Kind::ElementOf) {
        if (!t.isShaped())
          throw DialectError(def.qualifiedName() + ": operand '" + def.operands[c.ref].name +
                             "' is not shaped (" + t.str() + ")");
        types.push_back(t.elementType());
      } else {
        types.push_back(t);
      }
      break;
    }
    default: {
      // A single typed attribute (arith.constant's value) fixes the type.
      const ir::Attribute *typed = nullptr;
      std::size_t numTyped = 0;
      for (const auto &spec : def.attributes) {
        auto it = attributes.find(spec.name);
        if (spec.kind == AttrKind::Typed && it != attributes.end() && it->second.isTyped()) {
          typed = &it->second;
          ++numTyped;
        }
      }
      if (numTyped == 1 && def.results.size() == 1) {
        types.push_back(typed->typeValue());
        break;
      }
      throw DialectError(def.qualifiedName() + ": type of result '" + r.name + "' (" + c.str() +
                         ") is not determined by the operands; pass result types explicitly");
    }
    }
  }
  return types;
}

//===----------------------------------------------------------------------===//
// Registry and builders
//===----------------------------------------------------------------------===//

void DialectRegistry::registerDialect(DialectDefinition dialect) {
  if (dialects_.count(dialect.name))
    throw DialectError("dialect '" + dialect.name + "' is already registered");
  std::string name = dialect.name;
  dialects_.emplace(std::move(name), std::move(dialect));
}

bool DialectRegistry::hasDialect(std::string_view name) const { return dialects_.find(name) != dialects_.end(); }

const DialectDefinition *DialectRegistry::dialect(std::string_view name) const {
  auto it = dialects_.find(name);
  return it == dialects_.end() ? nullptr : &it->second;
}

const OpDefinition *DialectRegistry::lookup(std::string_view qualifiedName) const {
  auto dot = qualifiedName.find('.');
  if (dot == std::string_view::npos)
    return nullptr;
  const DialectDefinition *d = dialect(qualifiedName.substr(0, dot));
  return d ? d->lookup(qualifiedName.substr(dot + 1)) : nullptr;
}

std::vector<std::string> DialectRegistry::opNames() const {
  std::vector<std::string> names;
  for (const auto &[_, d] : dialects_)
    for (const auto &op : d.ops)
      names.push_back(op.qualifiedName());
  return names;
}

bool DialectRegistry::isTerminator(std::string_view name) const {
  const OpDefinition *def = lookup(name);
  return def && def->terminator;
}

void DialectRegistry::checkOp(const ir::Operation &op, std::vector<ir::Diagnostic> &out) const {
  const OpDefinition *def = lookup(op.name());
  if (!def)
    return;
  std::vector<ir::Type> operandTypes, resultTypes;
  for (auto v : op.operands())
    operandTypes.push_back(v.type());
  for (auto v : op.results())
    resultTypes.push_back(v.type());
  checkAgainstDefinition(*def, operandTypes, resultTypes, op.attributes(), op.numRegions(), op.successors().size(),
                         &op, op.parentBlock() ? op.parentBlock()->id() : 0, out);
}

ir::Operation &buildOp(const DialectRegistry &registry, ir::Module &module, std::string_view name, OpArgs args) {
  const OpDefinition *def = registry.lookup(name);
  if (!def)
    throw DialectError("unknown op '" + std::string(name) + "'");

  std::vector<ir::Type> resultTypes =
      args.resultTypes.empty() ? inferResultTypes(*def, args.operands, args.attributes) : std::move(args.resultTypes);

  std::vector<ir::Type> operandTypes;
  for (auto v : args.operands) {
    if (!v)
      throw DialectError(def->qualifiedName() + ": null operand");
    operandTypes.push_back(v.type());
  }
  std::vector<ir::Diagnostic> diags;
  checkAgainstDefinition(*def, operandTypes, resultTypes, args.attributes, def->numRegions, args.successors.size(),
                         nullptr, 0, diags);
  if (!diags.empty()) {
    std::string msg = def->qualifiedName() + ":";
    for (const auto &d : diags)
      msg += " " + d.message + ";";
    msg.pop_back();
    throw DialectError(msg);
  }

  ir::OperationState state;
  state.name = def->qualifiedName();
  state.operands = std::move(args.operands);
  state.resultTypes = std::move(resultTypes);
  state.attributes = std::move(args.attributes);
  state.numRegions = def->numRegions;
  state.successors = std::move(args.successors);
  return module.createOp(state);
}

} // namespace bridgegen::dialects
