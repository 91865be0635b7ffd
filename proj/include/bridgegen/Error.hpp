#pragma once

#include <stdexcept>
#include <string>

namespace bridgegen {

/// Base class of every error thrown by the library. Verification and
/// validation passes report through diagnostics lists instead.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace bridgegen
