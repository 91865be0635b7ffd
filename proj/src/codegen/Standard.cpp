#include "bridgegen/codegen/Standard.hpp"
#include "bridgegen/codegen/Generate.hpp"

namespace bridgegen::codegen {

namespace {

FrontendType ty(const char *name) { return FrontendType::concrete(name); }

IntrinsicBuilder binary(std::string op) {
  return [op](IntrinsicCall &c) -> ir::ValueList { return {c.ctx.build1(op, {c.arg(0), c.arg(1)})}; };
}

IntrinsicBuilder unary(std::string op) {
  return [op](IntrinsicCall &c) -> ir::ValueList { return {c.ctx.build1(op, {c.arg(0)})}; };
}

IntrinsicBuilder compare(std::string predicate) {
  return [predicate](IntrinsicCall &c) -> ir::ValueList {
    ir::AttrMap attrs;
    attrs["predicate"] = ir::Attribute::string(predicate);
    return {c.ctx.build1("arith.cmpi", {c.arg(0), c.arg(1)}, std::move(attrs))};
  };
}

IntrinsicBuilder cast(ir::Type to) {
  return [to](IntrinsicCall &c) -> ir::ValueList {
    dialects::OpArgs args;
    args.operands = {c.arg(0)};
    args.resultTypes = {to};
    return {c.ctx.build("arith.index_cast", std::move(args)).result(0)};
  };
}

} // namespace

void registerScalarIntrinsics(IntrinsicRegistry &reg) {
  for (const char *f : {"f32", "f64"}) {
    FrontendType t = ty(f);
    reg.registerIntrinsic({"+", {t, t}}, binary("arith.addf"));
    reg.registerIntrinsic({"-", {t, t}}, binary("arith.subf"));
    reg.registerIntrinsic({"*", {t, t}}, binary("arith.mulf"));
    reg.registerIntrinsic({"/", {t, t}}, binary("arith.divf"));
    reg.registerIntrinsic({"-", {t}}, unary("arith.negf"));
    reg.registerIntrinsic({"exp", {t}}, unary("math.exp"));

    FrontendType c = FrontendType::concrete("Complex", {t});
    reg.registerIntrinsic({"+", {c, c}}, [](IntrinsicCall &call) -> ir::ValueList {
      auto &a = call.args[0];
      auto &b = call.args[1];
      return {call.ctx.build1("arith.addf", {a[0], b[0]}), call.ctx.build1("arith.addf", {a[1], b[1]})};
    });
    reg.registerIntrinsic({"*", {c, c}}, [](IntrinsicCall &call) -> ir::ValueList {
      auto &a = call.args[0];
      auto &b = call.args[1];
      auto &ctx = call.ctx;
      ir::Value rr = ctx.build1("arith.mulf", {a[0], b[0]});
      ir::Value ii = ctx.build1("arith.mulf", {a[1], b[1]});
      ir::Value ri = ctx.build1("arith.mulf", {a[0], b[1]});
      ir::Value ir_ = ctx.build1("arith.mulf", {a[1], b[0]});
      return {ctx.build1("arith.subf", {rr, ii}), ctx.build1("arith.addf", {ri, ir_})};
    });
  }

  FrontendType i64 = ty("i64");
  reg.registerIntrinsic({"+", {i64, i64}}, binary("arith.addi"));
  reg.registerIntrinsic({"-", {i64, i64}}, binary("arith.subi"));
  reg.registerIntrinsic({"*", {i64, i64}}, binary("arith.muli"));
  const std::pair<const char *, const char *> comparisons[] = {{"==", "eq"}, {"!=", "ne"}, {"<", "slt"},
                                                               {"<=", "sle"}, {">", "sgt"}, {">=", "sge"}};
  for (auto [name, pred] : comparisons)
    reg.registerIntrinsic({name, {i64, i64}}, compare(pred));

  reg.registerIntrinsic({"i64", {ty("index")}}, cast(ir::Type::integer(64)));
  reg.registerIntrinsic({"index", {i64}}, cast(ir::Type::index()));
}

IntrinsicRegistry scalarRegistry() {
  IntrinsicRegistry reg;
  registerScalarIntrinsics(reg);
  return reg;
}

} // namespace bridgegen::codegen
