#include "Helpers.hpp"

#include "bridgegen/codegen/Standard.hpp"
#include "bridgegen/driver/Driver.hpp"
#include "bridgegen/gpu/Gpu.hpp"
#include "bridgegen/interp/Interpreter.hpp"
#include "bridgegen/ir/Printer.hpp"

#include <gtest/gtest.h>

using namespace bridgegen;

namespace {

std::vector<std::string> walkNames(const ir::Module &m) {
  std::vector<std::string> out;
  const ir::Region &r = m.topBlock().op(0).region(0);
  for (std::size_t b = 0; b < r.size(); ++b)
    for (std::size_t i = 0; i < r.block(b).size(); ++i)
      out.push_back(r.block(b).op(i).name());
  return out;
}

} // namespace

TEST(GpuDimension, Names) {
  EXPECT_STREQ(gpu::dimensionName(gpu::GpuDimension::Y), "y");
  EXPECT_EQ(gpu::parseDimension("z"), gpu::GpuDimension::Z);
  EXPECT_FALSE(gpu::parseDimension("w").has_value());
}

TEST(GpuIntrinsics, RegisteringTwiceFails) {
  auto reg = codegen::scalarRegistry();
  gpu::registerGpuIntrinsics(reg);
  EXPECT_THROW(gpu::registerGpuIntrinsics(reg), codegen::CodegenError);
}

TEST(GpuIntrinsics, ThreadIdxBuildsThreadId) {
  auto reg = driver::defaultRegistry();
  auto c = driver::compileSource(reg, "fn t()\n1:\n  %1 = invoke thread_idx_x() :: index\n  return %1\n", "t", "");
  auto ops = walkNames(*c.module);
  EXPECT_EQ(ops, (std::vector<std::string>{"gpu.thread_id", "func.return"}));
  EXPECT_NE(ir::printModule(*c.module).find("gpu.thread_id x"), std::string::npos);
}

TEST(GpuIntrinsics, EveryDimension) {
  auto reg = driver::defaultRegistry();
  std::string src = "fn t()\n1:\n";
  unsigned id = 1;
  for (const char *f : {"thread_idx", "block_idx", "block_dim"})
    for (const char *d : {"x", "y", "z"})
      src += "  %" + std::to_string(id++) + " = invoke " + f + "_" + d + "() :: index\n";
  src += "  return %9\n";
  auto c = driver::compileSource(reg, src, "t", "");
  const ir::Block &entry = c.module->topBlock().op(0).region(0).entry();
  ASSERT_EQ(entry.size(), 10u);
  const char *dims[] = {"x", "y", "z"};
  for (std::size_t i = 0; i < 9; ++i) {
    const ir::Attribute *a = entry.op(i).attr("dimension");
    ASSERT_NE(a, nullptr);
    EXPECT_EQ(a->text(), dims[i % 3]);
  }
}

TEST(GpuIntrinsics, VaddKernel) {
  auto reg = driver::defaultRegistry();
  auto src = helpers::readFile(std::string(BRIDGEGEN_SAMPLES) + "/vadd.fir");
  auto c = driver::compileSource(reg, src, "vadd", "memref{f32,1}, memref{f32,1}, memref{f32,1}");
  EXPECT_EQ(c.module->topBlock().op(0).region(0).size(), 1u);
  auto ops = walkNames(*c.module);
  EXPECT_EQ(ops, (std::vector<std::string>{"gpu.block_id", "gpu.block_dim", "arith.muli", "gpu.thread_id",
                                           "arith.addi", "memref.load", "memref.load", "arith.addf", "memref.store",
                                           "func.return"}));
  for (const auto &n : ops)
    EXPECT_NE(n.rfind("cf.", 0), 0u) << n;
}

TEST(GpuIntrinsics, VaddIsGenericOverElementType) {
  auto reg = driver::defaultRegistry();
  auto src = helpers::readFile(std::string(BRIDGEGEN_SAMPLES) + "/vadd.fir");
  // The declared f32 signature is concrete, so only f32 is accepted.
  EXPECT_THROW(driver::compileSource(reg, src, "vadd", "memref{f64,1}, memref{f64,1}, memref{f64,1}"),
               driver::PipelineError);
  auto generic = R"(fn vadd(_a: memref{i64,1}, _b: memref{i64,1}, _c: memref{i64,1})
1:
  %1 = invoke thread_idx_x() :: index
  %2 = invoke load(_a, %1) :: i64
  %3 = invoke load(_b, %1) :: i64
  %4 = invoke +(%2, %3) :: i64
  %5 = invoke store(%4, _c, %1) :: Nothing
  return
)";
  auto c = driver::compileSource(reg, generic, "vadd", "memref{i64,1}, memref{i64,1}, memref{i64,1}");
  auto ops = walkNames(*c.module);
  EXPECT_EQ(ops, (std::vector<std::string>{"gpu.thread_id", "memref.load", "memref.load", "arith.addi",
                                           "memref.store", "func.return"}));
}

TEST(GpuIntrinsics, StoreTypeMismatch) {
  auto reg = driver::defaultRegistry();
  auto src = R"(fn s(_v: f32, _m: memref{f64,1})
1:
  %1 = invoke thread_idx_x() :: index
  %2 = invoke store(_v, _m, %1) :: Nothing
  return
)";
  EXPECT_THROW(driver::compileSource(reg, src, "s", "f32, memref{f64,1}"), driver::PipelineError);
}

TEST(GpuIntrinsics, IndexArithmetic) {
  auto reg = driver::defaultRegistry();
  auto src = R"(fn ix(_i: index, _j: index)
1:
  %1 = invoke +(_i, _j) :: index
  %2 = invoke *(%1, 2) :: index
  %3 = invoke -(%2, _i) :: index
  return %3
)";
  auto c = driver::compileSource(reg, src, "ix", "index, index");
  auto ops = walkNames(*c.module);
  EXPECT_EQ(ops, (std::vector<std::string>{"arith.constant", "arith.addi", "arith.muli", "arith.subi", "func.return"}));
  auto out = interp::runFunction(*c.module, "ix", {interp::RuntimeValue::index(3), interp::RuntimeValue::index(4)});
  EXPECT_EQ(out.at(0).intValue(), 11);
}
