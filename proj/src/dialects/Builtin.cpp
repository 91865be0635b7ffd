#include "bridgegen/dialects/Dialect.hpp"

namespace bridgegen::dialects {
namespace {

constexpr std::string_view kArith = R"(dialect arith
# Scalar arithmetic.

op constant "Materializes a scalar constant given by the `value` attribute."
  attr value typed required
  result res Any

op addf "Floating-point addition."
  operand lhs AnyFloat
  operand rhs same(0)
  result res same(0)

op subf "Floating-point subtraction."
  operand lhs AnyFloat
  operand rhs same(0)
  result res same(0)

op mulf "Floating-point multiplication."
  operand lhs AnyFloat
  operand rhs same(0)
  result res same(0)

op divf "Floating-point division."
  operand lhs AnyFloat
  operand rhs same(0)
  result res same(0)

op negf "Floating-point negation."
  operand operand AnyFloat
  result res same(0)

op addi "Integer addition with two's complement wrap-around."
  operand lhs AnyInteger
  operand rhs same(0)
  result res same(0)

op subi "Integer subtraction with two's complement wrap-around."
  operand lhs AnyInteger
  operand rhs same(0)
  result res same(0)

op muli "Integer multiplication with two's complement wrap-around."
  operand lhs AnyInteger
  operand rhs same(0)
  result res same(0)

op cmpi "Signed integer comparison producing an i1."
  operand lhs AnyInteger
  operand rhs same(0)
  attr predicate enum(eq|ne|slt|sle|sgt|sge) required
  result res i1

op index_cast "Converts between index and integer types."
  operand in AnyInteger
  result out AnyInteger
)";

constexpr std::string_view kMath = R"(dialect math

op exp "Base-e exponential of a float."
  operand operand AnyFloat
  result res same(0)
)";

constexpr std::string_view kCf = R"(dialect cf
# Unstructured control flow. Branch operands travel with the successors.

op br "Unconditional branch."
  terminator successors 1

op cond_br "Branches to the first successor when the condition is true, else to the second."
  operand condition i1
  terminator successors 2
)";

constexpr std::string_view kFunc = R"(dialect func

op func "A function symbol with a single body region."
  attr sym_name string required
  attr function_type type required
  regions 1

op return "Returns from the enclosing function."
  operand operands Any variadic
  terminator

op call "Calls a function symbol."
  operand operands Any variadic
  attr callee symbol required
  result results Any variadic
)";

constexpr std::string_view kLinalg = R"(dialect linalg

op generic "Structured loop nest over tensors. Operands are the inputs followed by one output; the body region receives one element per operand and yields the new output element."
  operand inputs AnyTensor variadic
  operand output AnyTensor
  attr indexing_maps array required
  attr iterator_types array required
  result res same(1)
  regions 1

op yield "Yields values from a linalg body region."
  operand values Any variadic
  terminator
)";

constexpr std::string_view kGpu = R"(dialect gpu
# Thread-indexing queries. Ids are zero-based.

op thread_id "Index of the current thread within its block along one dimension."
  attr dimension enum(x|y|z) required
  result res index

op block_id "Index of the current block within the grid along one dimension."
  attr dimension enum(x|y|z) required
  result res index

op block_dim "Number of threads per block along one dimension."
  attr dimension enum(x|y|z) required
  result res index
)";

constexpr std::string_view kMemRef = R"(dialect memref

op load "Reads one element of a memref."
  operand memref AnyMemRef
  operand indices index variadic
  result res elem(0)

op store "Writes one element of a memref."
  operand value elem(1)
  operand memref AnyMemRef
  operand indices index variadic
)";

struct Entry {
  std::string_view name;
  std::string_view text;
};

constexpr Entry kBuiltins[] = {{"arith", kArith}, {"math", kMath},     {"cf", kCf},         {"func", kFunc},
                               {"linalg", kLinalg}, {"gpu", kGpu}, {"memref", kMemRef}};

} // namespace

std::string_view builtinDialectSpec(std::string_view name) {
  for (const auto &e : kBuiltins)
    if (e.name == name)
      return e.text;
  return {};
}

std::vector<std::string> builtinDialectNames() {
  std::vector<std::string> names;
  for (const auto &e : kBuiltins)
    names.emplace_back(e.name);
  return names;
}

std::shared_ptr<DialectRegistry> builtinRegistry() {
  auto registry = std::make_shared<DialectRegistry>();
  for (const auto &e : kBuiltins)
    registry->registerDialect(loadDialectSpec(e.text));
  return registry;
}

} // namespace bridgegen::dialects
