#include "bridgegen/gpu/Gpu.hpp"
#include "bridgegen/codegen/Generate.hpp"

namespace bridgegen::gpu {

using codegen::IntrinsicCall;
using fir::FrontendType;

const char *dimensionName(GpuDimension d) {
  switch (d) {
  case GpuDimension::X:
    return "x";
  case GpuDimension::Y:
    return "y";
  case GpuDimension::Z:
    return "z";
  }
  return "?";
}

std::optional<GpuDimension> parseDimension(std::string_view text) {
  if (text == "x")
    return GpuDimension::X;
  if (text == "y")
    return GpuDimension::Y;
  if (text == "z")
    return GpuDimension::Z;
  return std::nullopt;
}

void registerGpuIntrinsics(codegen::IntrinsicRegistry &registry) {
  for (const char *dialect : {"gpu", "memref", "arith"})
    if (!registry.dialects().hasDialect(dialect))
      throw codegen::CodegenError(std::string("GPU intrinsics need the '") + dialect + "' dialect");

  const std::pair<const char *, const char *> idOps[] = {
      {"thread_idx", "gpu.thread_id"}, {"block_idx", "gpu.block_id"}, {"block_dim", "gpu.block_dim"}};
  for (auto [prefix, op] : idOps)
    for (GpuDimension d : {GpuDimension::X, GpuDimension::Y, GpuDimension::Z}) {
      std::string name = std::string(prefix) + "_" + dimensionName(d);
      std::string opName = op;
      std::string dim = dimensionName(d);
      registry.registerIntrinsic({name, {}}, [opName, dim](IntrinsicCall &c) -> ir::ValueList {
        ir::AttrMap attrs;
        attrs["dimension"] = ir::Attribute::string(dim);
        return {c.ctx.build1(opName, {}, std::move(attrs))};
      });
    }

  FrontendType index = FrontendType::concrete("index");
  for (const char *t : {"f32", "f64", "i64"}) {
    FrontendType elem = FrontendType::concrete(t);
    FrontendType buf = FrontendType::concrete("memref", {elem, FrontendType::intParam(1)});
    registry.registerIntrinsic({"load", {buf, index}}, [](IntrinsicCall &c) -> ir::ValueList {
      return {c.ctx.build1("memref.load", {c.arg(0), c.arg(1)})};
    });
    registry.registerIntrinsic({"store", {elem, buf, index}}, [](IntrinsicCall &c) -> ir::ValueList {
      dialects::OpArgs args;
      args.operands = {c.arg(0), c.arg(1), c.arg(2)};
      c.ctx.build("memref.store", std::move(args));
      return {};
    });
  }

  const std::pair<const char *, const char *> indexOps[] = {{"+", "arith.addi"}, {"-", "arith.subi"}, {"*", "arith.muli"}};
  for (auto [name, op] : indexOps) {
    std::string opName = op;
    registry.registerIntrinsic({name, {index, index}}, [opName](IntrinsicCall &c) -> ir::ValueList {
      return {c.ctx.build1(opName, {c.arg(0), c.arg(1)})};
    });
  }
}

} // namespace bridgegen::gpu
