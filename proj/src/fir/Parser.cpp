#include "bridgegen/fir/Parser.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>

namespace bridgegen::fir {
namespace {

bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Annotation {
  FirArg arg;
  FrontendType type;
  unsigned line, column;
};

struct BlockRef {
  unsigned target;
  unsigned line, column;
};

struct SsaUse {
  std::uint32_t id;
  unsigned line, column;
};

/// Cursor over a single line.
class LineCursor {
public:
  LineCursor(std::string_view text, unsigned line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string &msg) const { throw FirParseError(line_, column(), msg); }
  [[noreturn]] void failAt(unsigned column, const std::string &msg) const { throw FirParseError(line_, column, msg); }

  unsigned column() const { return static_cast<unsigned>(pos_) + 1; }
  unsigned line() const { return line_; }

  void skipSpace() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r'))
      ++pos_;
  }
  bool atEnd() {
    skipSpace();
    return pos_ >= text_.size();
  }
  char peek() {
    skipSpace();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool consume(std::string_view tok) {
    skipSpace();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  /// Consumes a keyword only when not followed by an identifier character.
  bool consumeWord(std::string_view word) {
    skipSpace();
    if (text_.substr(pos_, word.size()) != word)
      return false;
    std::size_t end = pos_ + word.size();
    if (end < text_.size() && isIdentChar(text_[end]))
      return false;
    pos_ = end;
    return true;
  }
  void expect(std::string_view tok) {
    if (!consume(tok))
      fail("expected '" + std::string(tok) + "'");
  }
  void expectEnd() {
    if (!atEnd())
      fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
  }

  std::string identifier() {
    skipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() && isIdentChar(text_[pos_]))
      ++pos_;
    if (start == pos_)
      fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint64_t number() {
    skipSpace();
    std::uint64_t v = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (res.ec != std::errc())
      fail("expected a number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  /// Type text: identifiers, digits and balanced braces, stopping at a
  /// top-level ',' or ')' or the end of the line.
  std::string typeText() {
    skipSpace();
    std::size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '{')
        ++depth;
      else if (c == '}') {
        if (depth == 0)
          break;
        --depth;
      } else if (depth == 0 && (c == ',' || c == ')'))
        break;
      ++pos_;
    }
    std::string t(text_.substr(start, pos_ - start));
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back())))
      t.pop_back();
    if (t.empty())
      fail("expected a type");
    return t;
  }

  /// Invoke target: everything up to the opening parenthesis.
  std::string target() {
    skipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ' ')
      ++pos_;
    if (start == pos_)
      fail("expected an invoke target");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view rest() const { return text_.substr(pos_); }
  std::size_t &pos() { return pos_; }
  std::string_view text() const { return text_; }

private:
  std::string_view text_;
  unsigned line_;
  std::size_t pos_ = 0;
};

class Parser {
public:
  Parser(std::string_view text, const TypeLattice &lattice) : text_(text), lattice_(lattice) {}

  FirProgram run() {
    unsigned lineNo = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t nl = text_.find('\n', start);
      std::string_view raw = text_.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
      ++lineNo;
      handleLine(stripComment(raw), lineNo);
      if (nl == std::string_view::npos)
        break;
      start = nl + 1;
    }
    finishFunction();
    return std::move(program_);
  }

private:
  static std::string_view stripComment(std::string_view line) {
    auto pos = line.find("//");
    return pos == std::string_view::npos ? line : line.substr(0, pos);
  }

  FrontendType parseType(LineCursor &cur, unsigned column, const std::string &text) {
    try {
      return lattice_.parse(text);
    } catch (const Error &e) {
      cur.failAt(column, e.what());
    }
  }

  void handleLine(std::string_view text, unsigned lineNo) {
    LineCursor cur(text, lineNo);
    if (cur.atEnd())
      return;
    if (cur.consumeWord("fn")) {
      parseHeader(cur);
      return;
    }
    if (!current_)
      cur.fail("expected 'fn' before statements");
    if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      std::size_t save = cur.pos();
      unsigned col = cur.column();
      std::uint64_t n = cur.number();
      if (cur.consume(":") && cur.atEnd()) {
        if (n != current_->blocks.size() + 1)
          cur.failAt(col, "expected block " + std::to_string(current_->blocks.size() + 1) + ", found block " +
                              std::to_string(n));
        current_->blocks.emplace_back();
        return;
      }
      cur.pos() = save;
    }
    if (current_->blocks.empty())
      cur.fail("statement before the first block header");
    current_->blocks.back().statements.push_back(parseStatement(cur));
  }

  void parseHeader(LineCursor &cur) {
    finishFunction();
    FirFunction fn;
    fn.name = cur.identifier();
    if (program_.contains(fn.name))
      cur.fail("duplicate function '" + fn.name + "'");
    cur.expect("(");
    if (!cur.consume(")")) {
      while (true) {
        unsigned col = cur.column();
        if (cur.peek() != '_')
          cur.fail("parameter names start with '_'");
        std::string name = cur.identifier();
        for (const auto &p : fn.paramNames)
          if (p == name)
            cur.failAt(col, "duplicate parameter '" + name + "'");
        if (!cur.consume("::"))
          cur.expect(":");
        unsigned tcol = cur.column() + 1;
        fn.paramNames.push_back(name);
        fn.paramTypes.push_back(parseType(cur, tcol, cur.typeText()));
        if (cur.consume(")"))
          break;
        cur.expect(",");
      }
    }
    cur.expectEnd();
    program_.functions.push_back(std::move(fn));
    current_ = &program_.functions.back();
    ids_.clear();
    uses_.clear();
    blockRefs_.clear();
    annotations_.clear();
  }

  FirArg parseArg(LineCursor &cur) {
    cur.skipSpace();
    unsigned col = cur.column();
    FirArg arg;
    char c = cur.peek();
    if (c == '%') {
      cur.consume("%");
      arg = FirArg::ssa(static_cast<std::uint32_t>(cur.number()));
      uses_.push_back({arg.ref, cur.line(), col});
    } else if (c == '_') {
      std::string name = cur.identifier();
      auto &names = current_->paramNames;
      std::size_t i = 0;
      while (i < names.size() && names[i] != name)
        ++i;
      if (i == names.size())
        cur.failAt(col, "unknown parameter '" + name + "'");
      arg = FirArg::param(static_cast<std::uint32_t>(i));
    } else if (cur.consumeWord("true")) {
      arg = FirArg::boolean(true);
    } else if (cur.consumeWord("false")) {
      arg = FirArg::boolean(false);
    } else {
      arg = parseNumber(cur);
    }
    if (cur.consume("::")) {
      unsigned tcol = cur.column() + 1;
      annotations_.push_back({arg, parseType(cur, tcol, cur.typeText()), cur.line(), col});
    }
    return arg;
  }

  FirArg parseNumber(LineCursor &cur) {
    cur.skipSpace();
    std::size_t start = cur.pos();
    std::string_view t = cur.text();
    std::size_t end = start;
    if (end < t.size() && (t[end] == '-' || t[end] == '+'))
      ++end;
    bool isFloat = false;
    while (end < t.size()) {
      char c = t[end];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++end;
      } else if (c == '.' || c == 'e' || c == 'E') {
        isFloat = true;
        ++end;
        if ((c == 'e' || c == 'E') && end < t.size() && (t[end] == '-' || t[end] == '+'))
          ++end;
      } else {
        break;
      }
    }
    std::string token(t.substr(start, end - start));
    if (token.empty() || token == "-" || token == "+")
      cur.fail("expected an argument");
    const char *b = token.data() + (token[0] == '+' ? 1 : 0);
    const char *e = token.data() + token.size();
    if (isFloat) {
      double v = 0;
      auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc() || res.ptr != e)
        cur.fail("malformed float literal '" + token + "'");
      cur.pos() = end;
      return FirArg::real(v);
    }
    std::int64_t v = 0;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e)
      cur.fail("malformed integer literal '" + token + "'");
    cur.pos() = end;
    return FirArg::integer(v);
  }

  unsigned parseBlockRef(LineCursor &cur) {
    cur.expect("#");
    unsigned col = cur.column();
    auto n = static_cast<unsigned>(cur.number());
    blockRefs_.push_back({n, cur.line(), col});
    return n;
  }

  FrontendType parseResultType(LineCursor &cur) {
    cur.expect("::");
    unsigned col = cur.column() + 1;
    std::string text(cur.rest());
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
      text.pop_back();
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
      text.erase(text.begin());
      ++col;
    }
    if (text.empty())
      cur.fail("expected a result type");
    FrontendType t = parseType(cur, col, text);
    cur.pos() = cur.text().size();
    return t;
  }

  FirStatement parseStatement(LineCursor &cur) {
    FirStatement stmt;
    if (cur.peek() == '%') {
      unsigned col = cur.column();
      cur.consume("%");
      stmt.id = static_cast<std::uint32_t>(cur.number());
      if (stmt.id == 0)
        cur.failAt(col, "SSA ids start at 1");
      if (!ids_.insert(stmt.id).second)
        cur.failAt(col, "redefinition of %" + std::to_string(stmt.id));
      cur.expect("=");
      if (cur.consumeWord("invoke")) {
        Invoke inv;
        inv.target = cur.target();
        cur.expect("(");
        if (!cur.consume(")")) {
          while (true) {
            inv.args.push_back(parseArg(cur));
            if (cur.consume(")"))
              break;
            cur.expect(",");
          }
        }
        inv.type = parseResultType(cur);
        stmt.body = std::move(inv);
      } else if (cur.consumeWord("phi") || cur.consume("φ")) {
        Phi phi;
        cur.expect("(");
        if (!cur.consume(")")) {
          while (true) {
            unsigned pred = parseBlockRef(cur);
            cur.expect("=>");
            phi.incomings.push_back({pred, parseArg(cur)});
            if (cur.consume(")"))
              break;
            cur.expect(",");
          }
        }
        phi.type = parseResultType(cur);
        stmt.body = std::move(phi);
      } else {
        cur.fail("expected 'invoke' or 'phi'");
      }
      cur.expectEnd();
      return stmt;
    }
    if (cur.consumeWord("goto")) {
      unsigned target = parseBlockRef(cur);
      if (cur.atEnd()) {
        stmt.body = Goto{target};
        return stmt;
      }
      if (!cur.consumeWord("ifnot")) {
        if (!(cur.consumeWord("if") && cur.consumeWord("not")))
          cur.fail("expected 'ifnot'");
      }
      stmt.body = GotoIfNot{parseArg(cur), target};
      cur.expectEnd();
      return stmt;
    }
    if (cur.consumeWord("return")) {
      Return ret;
      if (!cur.atEnd())
        ret.value = parseArg(cur);
      cur.expectEnd();
      stmt.body = ret;
      return stmt;
    }
    if (cur.consumeWord("nothing")) {
      if (cur.consume("::")) {
        unsigned col = cur.column();
        if (cur.identifier() != "Nothing")
          cur.failAt(col, "'nothing' can only be annotated as Nothing");
      }
      cur.expectEnd();
      stmt.body = Nothing{};
      return stmt;
    }
    cur.fail("unknown statement");
  }

  void finishFunction() {
    if (!current_)
      return;
    FirFunction &fn = *current_;
    if (fn.blocks.empty())
      throw FirParseError(lastLine(), 1, "function '" + fn.name + "' has no blocks");
    for (const auto &ref : blockRefs_)
      if (ref.target == 0 || ref.target > fn.numBlocks())
        throw FirParseError(ref.line, ref.column,
                            "reference to undefined block #" + std::to_string(ref.target) + " in '" + fn.name + "'");
    for (const auto &use : uses_)
      if (!ids_.count(use.id))
        throw FirParseError(use.line, use.column,
                            "reference to undefined SSA value %" + std::to_string(use.id) + " in '" + fn.name + "'");
    for (const auto &a : annotations_) {
      FrontendType actual = typeOf(fn, a.arg);
      if (a.arg.isLiteral())
        continue;
      if (!(actual == a.type))
        throw FirParseError(a.line, a.column,
                            "annotation " + a.type.str() + " does not match type " + actual.str());
    }
    current_ = nullptr;
  }

  unsigned lastLine() const {
    unsigned n = 1;
    for (char c : text_)
      n += c == '\n';
    return n;
  }

  std::string_view text_;
  const TypeLattice &lattice_;
  FirProgram program_;
  FirFunction *current_ = nullptr;
  std::set<std::uint32_t> ids_;
  std::vector<SsaUse> uses_;
  std::vector<BlockRef> blockRefs_;
  std::vector<Annotation> annotations_;
};

} // namespace

FirProgram parseProgram(std::string_view text, const TypeLattice &lattice) { return Parser(text, lattice).run(); }

} // namespace bridgegen::fir
