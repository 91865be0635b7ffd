#pragma once

#include "bridgegen/codegen/Intrinsics.hpp"

#include <optional>
#include <string_view>

namespace bridgegen::gpu {

enum class GpuDimension { X, Y, Z };

const char *dimensionName(GpuDimension d);
std::optional<GpuDimension> parseDimension(std::string_view text);

/// Registers, with 0-based ids:
///   thread_idx_{x,y,z}(), block_idx_{x,y,z}(), block_dim_{x,y,z}() -> index
///   load(memref{T,1}, index) -> T
///   store(T, memref{T,1}, index) -> Nothing
///   +, -, * on index
/// for T in f32, f64 and i64. Requires the gpu, memref and arith dialects.
void registerGpuIntrinsics(codegen::IntrinsicRegistry &registry);

} // namespace bridgegen::gpu
