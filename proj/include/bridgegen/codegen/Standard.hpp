#pragma once

#include "bridgegen/codegen/Intrinsics.hpp"

namespace bridgegen::codegen {

/// Scalar intrinsics: `+ - * /`, unary `-` and `exp` on f32/f64 (arith, math);
/// `+ - *` and the comparisons `== != < <= > >=` on i64 (arith.cmpi); `+`
/// and `*` on Complex{f32}/Complex{f64}; `i64(index)` and `index(i64)` casts.
void registerScalarIntrinsics(IntrinsicRegistry &registry);

/// A registry over the builtin dialects with the scalar intrinsics.
IntrinsicRegistry scalarRegistry();

} // namespace bridgegen::codegen
