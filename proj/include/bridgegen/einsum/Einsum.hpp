//===- Einsum.hpp - Einsum to linalg.generic -----------------------------===//
//
// `(i,k),(k,j)->(i,j)` becomes a linalg.generic over the axes (i, j, k):
// output indices first, then input-only indices in order of appearance. An
// axis is parallel when its index appears in the output and a reduction
// otherwise. The body multiplies the input elements and adds the current
// output element.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "bridgegen/codegen/Generate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bridgegen::einsum {

class EinsumError : public Error {
public:
  using Error::Error;
};

using IndexTuple = std::vector<std::string>;

struct EinsumSpec {
  std::vector<IndexTuple> inputs;
  IndexTuple output;
  /// Iteration axes d0, d1, ...
  std::vector<std::string> axes;

  std::string str() const;
  friend bool operator==(const EinsumSpec &, const EinsumSpec &) = default;
};

enum class IteratorType { Parallel, Reduction };
const char *iteratorName(IteratorType t);

struct DerivedMaps {
  /// One map per input, then the output map.
  std::vector<ir::IndexMap> maps;
  std::vector<IteratorType> iterators;
};

EinsumSpec parseEinsum(std::string_view text);
DerivedMaps deriveMaps(const EinsumSpec &spec);

/// Builds one linalg.generic at the current block. `operands` are the input
/// tensors followed by the output tensor.
ir::Operation &buildGeneric(codegen::BuilderContext &ctx, const EinsumSpec &spec, const ir::ValueList &operands);

/// Registers `name(tensor{T,r1}, ..., tensor{T,rout})` for T in f32 and f64,
/// taking the inputs then the output and returning the new output tensor.
void registerEinsumIntrinsic(codegen::IntrinsicRegistry &registry, const std::string &name, EinsumSpec spec);

/// Operand shapes (inputs, optionally followed by the output) checked for
/// rank and extent consistency. Returns the output shape.
std::vector<std::int64_t> checkShapes(const EinsumSpec &spec, const std::vector<std::vector<std::int64_t>> &shapes);

/// Translates a wrapper function `einsum(inputs..., output)` that invokes the
/// einsum intrinsic. Shapes, when given, are validated with checkShapes; the
/// tensor types stay dynamic.
ir::ModulePtr buildEinsumModule(const codegen::IntrinsicRegistry &base, const EinsumSpec &spec,
                                const fir::FrontendType &elementType,
                                const std::optional<std::vector<std::vector<std::int64_t>>> &shapes = std::nullopt);

} // namespace bridgegen::einsum
