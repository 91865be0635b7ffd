// Independent oracles and random generators shared by the unit and
// acceptance suites. Nothing here calls the code it is used to check.
#pragma once

#include "bridgegen/fir/Fir.hpp"
#include "bridgegen/interp/Interpreter.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

using Rng = std::mt19937_64;

// ---- Random FIR ----------------------------------------------------------

/// A well-formed i64 function `rand(_a: i64, _b: i64)` with every block
/// reachable, block 1 never a branch target, phis at block heads and
/// conditional branches on `<` results. `edges[k-1]` lists the successors the
/// generator gave block k (fallthrough included, true edge first).
struct RandomFir {
  bridgegen::fir::FirFunction fn;
  std::vector<std::vector<unsigned>> edges;
};

RandomFir randomFir(Rng &rng, unsigned maxBlocks = 8);

/// Direct evaluation of an i64/i1 FIR function using only `+ - * <` and
/// `bool_conversion_intrinsic`. nullopt when the step budget runs out.
std::optional<std::int64_t> evalFir(const bridgegen::fir::FirFunction &fn, const std::vector<std::int64_t> &args,
                                    std::uint64_t stepLimit = 100000);

// ---- Dispatch ------------------------------------------------------------

/// Six-type lattice: Any > Number > Real > {I, F}; Any > S. Names index
/// into kDispatchTypes; parent links are hard-coded here.
inline const std::vector<std::string> kDispatchTypes = {"Any", "Number", "Real", "I", "F", "S"};
inline const std::vector<int> kDispatchParent = {-1, 0, 1, 2, 2, 0};
inline const std::vector<bool> kDispatchAbstract = {true, true, true, false, false, false};

bool oracleSubtype(int sub, int super);

enum class OracleOutcome { Found, NoMethod, Ambiguous };

/// Applicable set by brute force, then the unique signature that is
/// pointwise a subtype of every other applicable one.
OracleOutcome oracleResolve(const std::vector<std::vector<int>> &signatures, const std::vector<int> &args,
                            std::size_t *winner = nullptr);

// ---- Einsum --------------------------------------------------------------

struct EinsumCase {
  std::vector<std::vector<char>> inputs;
  std::vector<char> output;
  std::map<char, std::int64_t> extent;

  std::string text() const;
  std::vector<std::int64_t> dims(const std::vector<char> &tuple) const;
};

/// At most `maxOperands` operands including the output, ranks <= 3, extents
/// 1..5, at most 5 distinct indices.
EinsumCase randomEinsum(Rng &rng, unsigned maxOperands = 3);

struct DenseTensor {
  std::vector<std::int64_t> dims;
  std::vector<double> data;
};

DenseTensor randomTensor(Rng &rng, std::vector<std::int64_t> dims);

/// Loop over every assignment of every index; output[out] += prod inputs.
/// `scale` receives, per output element, the sum of |product| terms.
DenseTensor bruteForceEinsum(const EinsumCase &c, const std::vector<DenseTensor> &inputs,
                             std::vector<double> *scale = nullptr);

/// Error of `got` against the oracle, relative to the magnitude of the summed
/// terms: max over elements of |got - want| / max(sum |terms|, tiny).
double einsumRelativeError(const std::vector<double> &got, const DenseTensor &want, const std::vector<double> &scale);

bridgegen::interp::RuntimeValue toRuntime(const DenseTensor &t, bool f32);
std::vector<double> fromRuntime(const bridgegen::interp::RuntimeValue &v);

} // namespace testsupport
