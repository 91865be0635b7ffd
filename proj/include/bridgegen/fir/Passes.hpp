#pragma once

#include "bridgegen/fir/Fir.hpp"

#include <functional>

namespace bridgegen::fir {

struct FirDiagnostic {
  unsigned block = 0;          ///< 1-based, 0 when not tied to a block
  std::size_t statement = 0;   ///< 1-based statement index within the block, 0 if none
  std::string message;

  std::string str() const;
};

struct FirReport {
  std::vector<FirDiagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
  std::string str() const;
};

FirReport validateFir(const FirFunction &fn);

class InlineError : public Error {
public:
  using Error::Error;
  InlineError(const std::string &msg, std::vector<std::string> cycle) : Error(msg), cycle_(std::move(cycle)) {}

  /// Functions on the call-graph cycle for recursion errors, in call order.
  const std::vector<std::string> &cycle() const { return cycle_; }

private:
  std::vector<std::string> cycle_;
};

using IntrinsicPredicate = std::function<bool(const std::string &name, const FrontendTypes &argTypes)>;

/// Inlines every call to a program-defined function into `entry`, callees
/// first. Calls the predicate accepts stay in place. Returns `entry`
/// unchanged (no renumbering) when it makes no program calls.
FirFunction inlineCalls(const FirProgram &program, std::string_view entry, const IntrinsicPredicate &isIntrinsic);

inline constexpr const char *kBoolConversion = "bool_conversion_intrinsic";

/// Inserts `bool_conversion_intrinsic(cond) :: Bool` before every GotoIfNot
/// whose condition type fails `isFrontendBool`, then renumbers. Returns the
/// input unchanged when nothing was inserted.
FirFunction insertBoolConversions(const FirFunction &fn,
                                  const std::function<bool(const FrontendType &)> &isFrontendBool);
/// Same, treating only the concrete `Bool` type as a frontend boolean.
FirFunction insertBoolConversions(const FirFunction &fn);

} // namespace bridgegen::fir
