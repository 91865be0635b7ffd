#include "Helpers.hpp"
#include "Support.hpp"

#include "bridgegen/codegen/Standard.hpp"
#include "bridgegen/einsum/Einsum.hpp"
#include "bridgegen/interp/Interpreter.hpp"
#include "bridgegen/ir/Printer.hpp"

#include <gtest/gtest.h>

using namespace bridgegen;
using namespace bridgegen::einsum;
using testsupport::DenseTensor;

namespace {

std::vector<std::string> names(std::initializer_list<const char *> xs) { return {xs.begin(), xs.end()}; }

ir::IndexMap map(unsigned dims, std::vector<unsigned> results) { return ir::IndexMap{dims, std::move(results)}; }

const ir::Operation &findGeneric(const ir::Module &m) {
  const ir::Block &entry = m.topBlock().op(0).region(0).entry();
  for (std::size_t i = 0; i < entry.size(); ++i)
    if (entry.op(i).name() == "linalg.generic")
      return entry.op(i);
  throw std::runtime_error("no linalg.generic");
}

/// Runs the generated einsum on `inputs` with a zero output and returns the
/// flattened result.
std::vector<double> runEinsum(const testsupport::EinsumCase &c, const std::vector<DenseTensor> &inputs, bool f32) {
  auto reg = codegen::scalarRegistry();
  auto spec = parseEinsum(c.text());
  auto m = buildEinsumModule(reg, spec, fir::FrontendType::concrete(f32 ? "f32" : "f64"));
  std::vector<interp::RuntimeValue> args;
  for (const auto &t : inputs)
    args.push_back(testsupport::toRuntime(t, f32));
  DenseTensor out{c.dims(c.output), {}};
  std::size_t n = 1;
  for (auto d : out.dims)
    n *= static_cast<std::size_t>(d);
  out.data.assign(n, 0.0);
  args.push_back(testsupport::toRuntime(out, f32));
  auto res = interp::runFunction(*m, "einsum", args);
  return testsupport::fromRuntime(res.at(0));
}

} // namespace

TEST(EinsumParse, Matmul) {
  auto s = parseEinsum("(i,k),(k,j)->(i,j)");
  ASSERT_EQ(s.inputs.size(), 2u);
  EXPECT_EQ(s.inputs[0], names({"i", "k"}));
  EXPECT_EQ(s.inputs[1], names({"k", "j"}));
  EXPECT_EQ(s.output, names({"i", "j"}));
  EXPECT_EQ(s.axes, names({"i", "j", "k"}));
  EXPECT_EQ(parseEinsum(s.str()), s);
}

TEST(EinsumParse, CopyAndWhitespace) {
  auto s = parseEinsum(" ( i ) -> ( i ) ");
  EXPECT_EQ(s.inputs.size(), 1u);
  EXPECT_EQ(s.axes, names({"i"}));
  auto multi = parseEinsum("(row, col)->(col)");
  EXPECT_EQ(multi.axes, names({"col", "row"}));
}

TEST(EinsumParse, Errors) {
  EXPECT_THROW(parseEinsum("(i,j)->(k)"), EinsumError);
  EXPECT_THROW(parseEinsum("(i,i)->(i)"), EinsumError);
  EXPECT_THROW(parseEinsum("(i,j)->(i,i)"), EinsumError);
  EXPECT_THROW(parseEinsum("(i,j)"), EinsumError);
  EXPECT_THROW(parseEinsum("i,j->i"), EinsumError);
  EXPECT_THROW(parseEinsum("->(i)"), EinsumError);
  EXPECT_THROW(parseEinsum("(i,)->(i)"), EinsumError);
}

TEST(EinsumMaps, Matmul) {
  auto d = deriveMaps(parseEinsum("(i,k),(k,j)->(i,j)"));
  ASSERT_EQ(d.maps.size(), 3u);
  EXPECT_EQ(d.maps[0], map(3, {0, 2}));
  EXPECT_EQ(d.maps[1], map(3, {2, 1}));
  EXPECT_EQ(d.maps[2], map(3, {0, 1}));
  EXPECT_EQ(d.iterators, (std::vector<IteratorType>{IteratorType::Parallel, IteratorType::Parallel,
                                                    IteratorType::Reduction}));
}

TEST(EinsumMaps, CopyAndFullReduction) {
  auto copy = deriveMaps(parseEinsum("(i)->(i)"));
  EXPECT_EQ(copy.maps, (std::vector<ir::IndexMap>{map(1, {0}), map(1, {0})}));
  EXPECT_EQ(copy.iterators, std::vector<IteratorType>{IteratorType::Parallel});

  auto sum = deriveMaps(parseEinsum("(i,j)->()"));
  ASSERT_EQ(sum.maps.size(), 2u);
  EXPECT_TRUE(sum.maps[1].results.empty());
  EXPECT_EQ(sum.iterators, (std::vector<IteratorType>{IteratorType::Reduction, IteratorType::Reduction}));
}

TEST(EinsumMaps, ChainOfThree) {
  auto s = parseEinsum("(i,j),(j,k),(k,l)->(i,l)");
  EXPECT_EQ(s.axes, names({"i", "l", "j", "k"}));
  auto d = deriveMaps(s);
  // Classification follows membership in the output for each axis of [i,l,j,k].
  EXPECT_EQ(d.iterators, (std::vector<IteratorType>{IteratorType::Parallel, IteratorType::Parallel,
                                                    IteratorType::Reduction, IteratorType::Reduction}));
  EXPECT_EQ(d.maps[0], map(4, {0, 2}));
  EXPECT_EQ(d.maps[1], map(4, {2, 3}));
  EXPECT_EQ(d.maps[2], map(4, {3, 1}));
  EXPECT_EQ(d.maps[3], map(4, {0, 1}));
}

TEST(EinsumMaps, RandomClassification) {
  testsupport::Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    auto c = testsupport::randomEinsum(rng, 4);
    auto s = parseEinsum(c.text());
    auto d = deriveMaps(s);
    ASSERT_EQ(d.maps.size(), s.inputs.size() + 1);
    ASSERT_EQ(d.iterators.size(), s.axes.size());
    for (std::size_t k = 0; k < s.axes.size(); ++k) {
      bool inOutput = std::find(s.output.begin(), s.output.end(), s.axes[k]) != s.output.end();
      EXPECT_EQ(d.iterators[k] == IteratorType::Parallel, inOutput);
    }
    for (std::size_t op = 0; op <= s.inputs.size(); ++op) {
      const auto &tuple = op < s.inputs.size() ? s.inputs[op] : s.output;
      ASSERT_EQ(d.maps[op].results.size(), tuple.size());
      EXPECT_EQ(d.maps[op].numDims, s.axes.size());
      for (std::size_t j = 0; j < tuple.size(); ++j)
        EXPECT_EQ(s.axes.at(d.maps[op].results[j]), tuple[j]);
    }
  }
}

TEST(EinsumBuild, MatmulStructure) {
  auto m = buildEinsumModule(codegen::scalarRegistry(), parseEinsum("(i,k),(k,j)->(i,j)"),
                             fir::FrontendType::concrete("f32"));
  const ir::Operation &g = findGeneric(*m);
  EXPECT_EQ(g.numOperands(), 3u);
  EXPECT_EQ(g.attr("indexing_maps")->elements().size(), 3u);
  const auto &its = g.attr("iterator_types")->elements();
  ASSERT_EQ(its.size(), 3u);
  EXPECT_EQ(its[2].text(), "reduction");
  const ir::Block &body = g.region(0).entry();
  EXPECT_EQ(body.numArguments(), 3u);
  std::vector<std::string> ops;
  for (std::size_t i = 0; i < body.size(); ++i)
    ops.push_back(body.op(i).name());
  EXPECT_EQ(ops, names({"arith.mulf", "arith.addf", "linalg.yield"}));
  EXPECT_EQ(g.result().type().str(), "tensor<?x?xf32>");
  auto report = ir::verifyModule(*m, dialects::builtinRegistry().get());
  EXPECT_TRUE(report.ok()) << report.str();
}

TEST(EinsumBuild, CopyYieldsInput) {
  auto m = buildEinsumModule(codegen::scalarRegistry(), parseEinsum("(i)->(i)"), fir::FrontendType::concrete("f64"));
  const ir::Block &body = findGeneric(*m).region(0).entry();
  ASSERT_EQ(body.size(), 1u);
  EXPECT_EQ(body.op(0).name(), "linalg.yield");
  EXPECT_EQ(body.op(0).operand(0), body.argument(0));
}

TEST(EinsumBuild, ShapeChecks) {
  auto s = parseEinsum("(i,k),(k,j)->(i,j)");
  EXPECT_EQ(checkShapes(s, {{4, 3}, {3, 5}}), (std::vector<std::int64_t>{4, 5}));
  EXPECT_EQ(checkShapes(s, {{4, 3}, {3, 5}, {4, 5}}), (std::vector<std::int64_t>{4, 5}));
  EXPECT_THROW(checkShapes(s, {{4, 3}, {2, 5}}), EinsumError);
  EXPECT_THROW(checkShapes(s, {{4, 3, 1}, {3, 5}}), EinsumError);
  EXPECT_THROW(checkShapes(s, {{4, 3}}), EinsumError);
  EXPECT_THROW(checkShapes(s, {{4, 3}, {3, 5}, {5, 4}}), EinsumError);
  EXPECT_THROW(buildEinsumModule(codegen::scalarRegistry(), s, fir::FrontendType::concrete("f32"),
                                 std::vector<std::vector<std::int64_t>>{{4, 3}, {2, 5}}),
               EinsumError);
}

TEST(EinsumBuild, RankAndElementMismatch) {
  auto reg = codegen::scalarRegistry();
  auto m = ir::Module::create();
  auto f32 = ir::Type::f32();
  ir::Block &entry = helpers::makeFunction(reg.dialects(), *m, "f",
                                           {ir::Type::dynamicTensor(f32, 2), ir::Type::dynamicTensor(f32, 1),
                                            ir::Type::dynamicTensor(ir::Type::f64(), 2),
                                            ir::Type::dynamicTensor(ir::Type::integer(64), 2)},
                                           {});
  codegen::BuilderContext ctx(*m, reg, nullptr);
  ctx.setCurrentBlock(&entry);
  auto s = parseEinsum("(i,k),(k,j)->(i,j)");
  EXPECT_THROW(buildGeneric(ctx, s, {entry.argument(0), entry.argument(1), entry.argument(0)}), EinsumError);
  EXPECT_THROW(buildGeneric(ctx, s, {entry.argument(0), entry.argument(2), entry.argument(0)}), EinsumError);
  EXPECT_THROW(buildGeneric(ctx, s, {entry.argument(3), entry.argument(3), entry.argument(3)}), EinsumError);
  EXPECT_THROW(buildGeneric(ctx, s, {entry.argument(0), entry.argument(0)}), EinsumError);
}

TEST(EinsumRun, MatmulAgainstTripleLoop) {
  testsupport::Rng rng(4);
  testsupport::EinsumCase c{{{'i', 'k'}, {'k', 'j'}}, {'i', 'j'}, {{'i', 4}, {'k', 3}, {'j', 5}}};
  auto a = testsupport::randomTensor(rng, {4, 3});
  auto b = testsupport::randomTensor(rng, {3, 5});
  auto got = runEinsum(c, {a, b}, true);
  ASSERT_EQ(got.size(), 20u);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j) {
      double want = 0, scale = 0;
      for (int k = 0; k < 3; ++k) {
        want += a.data[i * 3 + k] * b.data[k * 5 + j];
        scale += std::abs(a.data[i * 3 + k] * b.data[k * 5 + j]);
      }
      EXPECT_LE(std::abs(got[i * 5 + j] - want), 1e-5 * std::max(scale, 1e-30));
    }
}

TEST(EinsumRun, ChainOfThreeAgainstBruteForce) {
  testsupport::Rng rng(8);
  testsupport::EinsumCase c{{{'i', 'j'}, {'j', 'k'}, {'k', 'l'}}, {'i', 'l'}, {{'i', 2}, {'j', 3}, {'k', 2}, {'l', 4}}};
  std::vector<DenseTensor> in;
  for (const auto &t : c.inputs)
    in.push_back(testsupport::randomTensor(rng, c.dims(t)));
  std::vector<double> scale;
  auto want = testsupport::bruteForceEinsum(c, in, &scale);
  for (bool f32 : {true, false}) {
    auto got = runEinsum(c, in, f32);
    EXPECT_LE(testsupport::einsumRelativeError(got, want, scale), f32 ? 1e-5 : 1e-12);
  }
}

TEST(EinsumRun, ReductionToScalar) {
  testsupport::EinsumCase c{{{'i', 'j'}}, {}, {{'i', 2}, {'j', 3}}};
  DenseTensor t{{2, 3}, {1, 2, 3, 4, 5, 6}};
  auto got = runEinsum(c, {t}, false);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], 21.0);
}

TEST(EinsumRun, RandomAgainstBruteForce) {
  testsupport::Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    auto c = testsupport::randomEinsum(rng, 4);
    std::vector<DenseTensor> in;
    for (const auto &t : c.inputs)
      in.push_back(testsupport::randomTensor(rng, c.dims(t)));
    std::vector<double> scale;
    auto want = testsupport::bruteForceEinsum(c, in, &scale);
    auto got = runEinsum(c, in, true);
    EXPECT_LE(testsupport::einsumRelativeError(got, want, scale), 1e-5) << c.text();
  }
}
