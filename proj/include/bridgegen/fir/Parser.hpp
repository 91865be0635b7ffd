#pragma once

#include "bridgegen/fir/Fir.hpp"

#include <string_view>

namespace bridgegen::fir {

class FirParseError : public Error {
public:
  FirParseError(unsigned line, unsigned column, const std::string &msg)
      : Error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line),
        column_(column) {}

  unsigned line() const { return line_; }
  unsigned column() const { return column_; }

private:
  unsigned line_;
  unsigned column_;
};

/// Parses FIR text. Arguments may carry Julia-style annotations
/// (`%1::i1`, `_a::i64`); they are checked against the declared types.
FirProgram parseProgram(std::string_view text, const TypeLattice &lattice = TypeLattice::standard());

} // namespace bridgegen::fir
