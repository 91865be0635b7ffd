// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include "Support.hpp"

#include "bridgegen/codegen/Standard.hpp"
#include "bridgegen/dialects/Dialect.hpp"
#include "bridgegen/driver/Driver.hpp"
#include "bridgegen/einsum/Einsum.hpp"
#include "bridgegen/fir/Parser.hpp"
#include "bridgegen/interp/Interpreter.hpp"
#include "bridgegen/ir/Printer.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

using namespace bridgegen;
using interp::RuntimeValue;
using testsupport::Rng;

namespace {

// Tolerances and sizes.
constexpr double kGoldenSeconds = 1.0;
constexpr int kRandomFirCount = 150;
constexpr unsigned kRandomFirMaxBlocks = 8;
constexpr int kDispatchRegistries = 600;
constexpr double kSigmoidTol = 1e-6;
constexpr double kSigmoidAt2 = 0.8807970779778823;
constexpr double kChainF32RelTol = 1e-6;
constexpr double kEinsumRelTol = 1e-5;
constexpr int kEinsumRandomSpecs = 25;
constexpr double kEinsumSeconds = 10.0;
constexpr std::size_t kMinMalformed = 10;

std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sample(const char *name) { return readFile(std::string(BRIDGEGEN_SAMPLES) + "/" + name); }
std::string data(const std::string &name) { return std::string(BRIDGEGEN_TEST_DATA) + "/" + name; }

std::vector<std::string> trimmedLines(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos)
      continue;
    auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

double secondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string &title, const std::function<Outcome()> &check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

const codegen::IntrinsicRegistry &registry() {
  static codegen::IntrinsicRegistry reg = driver::defaultRegistry();
  return reg;
}

// ---- 1, 2 -----------------------------------------------------------------

Outcome goldenSigmoid() {
  auto t0 = std::chrono::steady_clock::now();
  auto c = driver::compileSource(registry(), sample("sigmoid.fir"), "sigmoid", "f32");
  std::string text = ir::printModule(*c.module);
  double secs = secondsSince(t0);
  auto want = trimmedLines(readFile(data("listing3.mlir")));
  auto got = trimmedLines(text);
  // Drop the enclosing `module {` / `}`.
  if (got.size() < 2)
    return {false, "empty output"};
  got = std::vector<std::string>(got.begin() + 1, got.end() - 1);
  std::size_t cst = 0;
  for (const auto &l : got)
    cst += l.find("arith.constant") != std::string::npos;
  bool ok = got == want && cst == 1 && secs < kGoldenSeconds;
  return {ok, std::to_string(got.size()) + "/" + std::to_string(want.size()) + " lines match=" +
                  (got == want ? "yes" : "no") + ", constants=" + std::to_string(cst) +
                  ", time=" + std::to_string(secs) + "s"};
}

Outcome goldenMax() {
  auto t0 = std::chrono::steady_clock::now();
  auto c = driver::compileSource(registry(), sample("max.fir"), "max", "i64, i64");
  std::string text = ir::printModule(*c.module);
  double secs = secondsSince(t0);
  auto want = trimmedLines(readFile(data("listing4.mlir")));
  auto got = trimmedLines(text);
  if (got.size() < 4)
    return {false, "short output"};
  bool header = got[1] == "func.func @max(%arg0: i64, %arg1: i64) -> i64 {";
  got = std::vector<std::string>(got.begin() + 2, got.end() - 2);
  std::size_t blocks = c.module->topBlock().op(0).region(0).size();
  bool ok = header && got == want && blocks == 4 && secs < kGoldenSeconds;
  return {ok, "header=" + std::string(header ? "yes" : "no") + ", body match=" + (got == want ? "yes" : "no") +
                  ", blocks=" + std::to_string(blocks) + ", time=" + std::to_string(secs) + "s"};
}

// ---- 3, 4 -----------------------------------------------------------------

struct CfgStats {
  int functions = 0;
  int cfgMismatches = 0;
  int phis = 0;
  int phiMismatches = 0;
  std::string firstProblem;
};

const CfgStats &cfgStats() {
  static CfgStats stats = [] {
    CfgStats s;
    auto reg = codegen::scalarRegistry();
    Rng rng(20240611);
    for (int n = 0; n < kRandomFirCount; ++n) {
      auto r = testsupport::randomFir(rng, kRandomFirMaxBlocks);
      auto fn = fir::insertBoolConversions(r.fn);
      auto tr = codegen::generateDetailed(reg, fn, reg.lattice().parseList("i64, i64"));
      ++s.functions;
      auto note = [&](const std::string &what) {
        if (s.firstProblem.empty())
          s.firstProblem = what + "\n" + fir::printFunction(fn);
      };
      const ir::Region &body = tr.function->region(0);
      // Edge sets computed independently: generator edges vs IR successors.
      std::set<std::pair<unsigned, unsigned>> firEdges, irEdges;
      for (unsigned b = 1; b <= r.edges.size(); ++b)
        for (unsigned t : r.edges[b - 1])
          firEdges.insert({b, t});
      for (std::size_t b = 0; b < body.size(); ++b)
        for (const auto &succ : body.block(b).back()->successors())
          irEdges.insert({static_cast<unsigned>(b + 1), static_cast<unsigned>(*body.indexOf(*succ.block) + 1)});
      bool verified = ir::verifyModule(*tr.module, &reg.dialects()).ok();
      if (body.size() != r.edges.size() || firEdges != irEdges || !verified) {
        ++s.cfgMismatches;
        note("cfg mismatch");
      }
      for (unsigned b = 1; b <= fn.numBlocks(); ++b) {
        const ir::Block *target = tr.blocks.at(b);
        // Entry block arguments are the parameters; phi arguments follow.
        std::size_t k = b == 1 ? fn.paramNames.size() : 0;
        for (const auto &st : fn.block(b).statements) {
          const auto *phi = st.as<fir::Phi>();
          if (!phi)
            continue;
          ++s.phis;
          bool ok = k < target->numArguments() && tr.values.at(st.id) == ir::ValueList{target->argument(k)};
          for (const auto &in : phi->incomings) {
            const ir::Operation *term = tr.blocks.at(in.pred)->back();
            const ir::Successor *edge = nullptr;
            for (const auto &succ : term->successors())
              if (succ.block == target)
                edge = &succ;
            if (!edge || edge->args.size() != target->numArguments()) {
              ok = false;
              continue;
            }
            ir::Value passed = edge->args[k];
            if (in.value.isLiteral()) {
              const ir::Operation *def = passed.definingOp();
              ok &= def && def->name() == "arith.constant" && def->attr("value")->intValue() == in.value.intValue;
            } else if (in.value.isParam()) {
              ok &= passed == body.entry().argument(in.value.ref);
            } else {
              ok &= ir::ValueList{passed} == tr.values.at(in.value.ref);
            }
          }
          if (!ok) {
            ++s.phiMismatches;
            note("phi mismatch");
          }
          ++k;
        }
        if (k != target->numArguments()) {
          ++s.phiMismatches;
          note("block argument count");
        }
      }
    }
    return s;
  }();
  return stats;
}

Outcome cfgIsomorphism() {
  const auto &s = cfgStats();
  return {s.functions >= 100 && s.cfgMismatches == 0,
          std::to_string(s.functions) + " functions, " + std::to_string(s.cfgMismatches) + " mismatches" +
              (s.firstProblem.empty() ? "" : "\n" + s.firstProblem)};
}

Outcome phiConversion() {
  const auto &s = cfgStats();
  return {s.phis > 0 && s.phiMismatches == 0,
          std::to_string(s.phis) + " phis, " + std::to_string(s.phiMismatches) + " mismatches"};
}

// ---- 5 --------------------------------------------------------------------

Outcome dispatchOracle() {
  using namespace testsupport;
  fir::TypeLattice lat;
  lat.addAbstract("Number");
  lat.addAbstract("Real", "Number");
  lat.addConcrete("I", "Real");
  lat.addConcrete("F", "Real");
  lat.addConcrete("S");
  auto typeOf = [&](int idx) { return idx == 0 ? fir::FrontendType::any() : lat.parse(kDispatchTypes[idx]); };
  Rng rng(5150);
  int disagreements = 0, queries = 0;
  int seen[3] = {0, 0, 0};
  for (int trial = 0; trial < kDispatchRegistries; ++trial) {
    codegen::IntrinsicRegistry reg(dialects::builtinRegistry(), lat);
    unsigned arity = 1 + rng() % 3;
    std::set<std::vector<int>> sigs;
    unsigned want = 1 + rng() % 6;
    while (sigs.size() < want) {
      std::vector<int> s(arity);
      for (auto &t : s)
        t = static_cast<int>(rng() % kDispatchTypes.size());
      sigs.insert(s);
    }
    std::vector<std::vector<int>> ordered(sigs.begin(), sigs.end());
    std::shuffle(ordered.begin(), ordered.end(), rng);
    for (const auto &s : ordered) {
      fir::FrontendTypes params;
      for (int t : s)
        params.push_back(typeOf(t));
      reg.registerIntrinsic({"op", params}, [](codegen::IntrinsicCall &) { return ir::ValueList{}; });
    }
    for (int q = 0; q < 4; ++q) {
      std::vector<int> args(arity);
      for (auto &a : args)
        a = 3 + static_cast<int>(rng() % 3);
      fir::FrontendTypes argTypes;
      for (int a : args)
        argTypes.push_back(typeOf(a));
      std::size_t winner = 0;
      auto expected = oracleResolve(ordered, args, &winner);
      auto got = reg.lookup("op", argTypes);
      ++queries;
      ++seen[static_cast<int>(expected)];
      bool agree = false;
      switch (expected) {
      case OracleOutcome::Found: {
        agree = got.status == codegen::Resolution::Status::Found;
        if (agree) {
          fir::FrontendTypes w;
          for (int t : ordered[winner])
            w.push_back(typeOf(t));
          agree = got.method->signature.params == w;
        }
        break;
      }
      case OracleOutcome::NoMethod:
        agree = got.status == codegen::Resolution::Status::NoMethod;
        break;
      case OracleOutcome::Ambiguous:
        agree = got.status == codegen::Resolution::Status::Ambiguous;
        break;
      }
      disagreements += !agree;
    }
  }
  bool ok = disagreements == 0 && seen[0] > 0 && seen[1] > 0 && seen[2] > 0;
  return {ok, std::to_string(kDispatchRegistries) + " registries, " + std::to_string(queries) +
                  " queries (found " + std::to_string(seen[0]) + ", no-method " + std::to_string(seen[1]) +
                  ", ambiguous " + std::to_string(seen[2]) + "), " + std::to_string(disagreements) +
                  " disagreements"};
}

// ---- 6 --------------------------------------------------------------------

Outcome inlining() {
  auto chain = sample("chain.fir");
  auto flat = readFile(data("chain_flat.fir"));
  auto program = fir::parseProgram(chain);
  auto deepI = driver::compileSource(registry(), chain, "outer", "i64, i64");
  auto deepF = driver::compileSource(registry(), chain, "fouter", "f32");
  auto handI = driver::compileSource(registry(), flat, "outer_flat", "i64, i64");
  auto handF = driver::compileSource(registry(), flat, "fouter_flat", "f32");

  std::size_t leftover = 0;
  for (const auto *c : {&deepI, &deepF})
    for (const auto &b : c->lowered.blocks)
      for (const auto &s : b.statements)
        if (const auto *inv = s.as<fir::Invoke>(); inv && program.contains(inv->target))
          ++leftover;

  Rng rng(66);
  std::uniform_int_distribution<std::int64_t> di(-1000, 1000);
  std::uniform_real_distribution<float> df(-3.0f, 3.0f);
  int intMismatch = 0;
  double worstRel = 0;
  for (int k = 0; k < 200; ++k) {
    std::vector<RuntimeValue> in{RuntimeValue::integer(64, di(rng)), RuntimeValue::integer(64, di(rng))};
    auto a = interp::runFunction(*deepI.module, "outer", in).at(0).intValue();
    auto b = interp::runFunction(*handI.module, "outer_flat", in).at(0).intValue();
    intMismatch += a != b;
    std::vector<RuntimeValue> fin{RuntimeValue::f32(df(rng))};
    double x = interp::runFunction(*deepF.module, "fouter", fin).at(0).asF32();
    double y = interp::runFunction(*handF.module, "fouter_flat", fin).at(0).asF32();
    worstRel = std::max(worstRel, std::abs(x - y) / std::max(std::abs(y), 1e-30));
  }
  bool ok = leftover == 0 && intMismatch == 0 && worstRel <= kChainF32RelTol;
  return {ok, "leftover calls=" + std::to_string(leftover) + ", i64 mismatches=" + std::to_string(intMismatch) +
                  "/200, worst f32 rel err=" + std::to_string(worstRel)};
}

// ---- 7 --------------------------------------------------------------------

Outcome semanticSigmoid() {
  auto c = driver::compileSource(registry(), sample("sigmoid.fir"), "sigmoid", "f32");
  float at2 = interp::runFunction(*c.module, "sigmoid", {RuntimeValue::f32(2.0f)}).at(0).asF32();
  float at0 = interp::runFunction(*c.module, "sigmoid", {RuntimeValue::f32(0.0f)}).at(0).asF32();
  double err = std::abs(static_cast<double>(at2) - kSigmoidAt2);
  bool ok = err <= kSigmoidTol && at0 == 0.5f;
  char buf[160];
  std::snprintf(buf, sizeof buf, "sigmoid(2)=%.9g (err %.3g), sigmoid(0)=%.9g", at2, err, at0);
  return {ok, buf};
}

// ---- 8 --------------------------------------------------------------------

double runEinsumCase(const testsupport::EinsumCase &c, Rng &rng) {
  std::vector<testsupport::DenseTensor> in;
  for (const auto &t : c.inputs)
    in.push_back(testsupport::randomTensor(rng, c.dims(t)));
  std::vector<double> scale;
  auto want = testsupport::bruteForceEinsum(c, in, &scale);
  auto m = einsum::buildEinsumModule(codegen::scalarRegistry(), einsum::parseEinsum(c.text()),
                                     fir::FrontendType::concrete("f32"));
  std::vector<RuntimeValue> args;
  for (const auto &t : in)
    args.push_back(testsupport::toRuntime(t, true));
  testsupport::DenseTensor zero{c.dims(c.output), std::vector<double>(want.data.size(), 0.0)};
  args.push_back(testsupport::toRuntime(zero, true));
  auto got = testsupport::fromRuntime(interp::runFunction(*m, "einsum", args).at(0));
  return testsupport::einsumRelativeError(got, want, scale);
}

Outcome einsumOracle() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(8080);
  testsupport::EinsumCase matmul{{{'i', 'k'}, {'k', 'j'}}, {'i', 'j'}, {{'i', 4}, {'k', 3}, {'j', 5}}};
  double worst = runEinsumCase(matmul, rng);
  double matmulErr = worst;
  int over = matmulErr > kEinsumRelTol;
  for (int n = 0; n < kEinsumRandomSpecs; ++n) {
    auto c = testsupport::randomEinsum(rng, 3);
    double e = runEinsumCase(c, rng);
    worst = std::max(worst, e);
    over += e > kEinsumRelTol;
  }
  double secs = secondsSince(t0);
  char buf[200];
  std::snprintf(buf, sizeof buf, "matmul err %.3g, %d random specs, worst rel err %.3g, %d over tol, %.2fs",
                matmulErr, kEinsumRandomSpecs, worst, over, secs);
  return {over == 0 && secs < kEinsumSeconds, buf};
}

// ---- 9 --------------------------------------------------------------------

Outcome gpuKernel() {
  auto c = driver::compileSource(registry(), sample("vadd.fir"), "vadd", "memref{f32,1}, memref{f32,1}, memref{f32,1}");
  interp::LaunchConfig launch;
  launch.grid = {2, 1, 1};
  launch.block = {4, 1, 1};
  std::vector<double> expected(8);
  std::vector<std::vector<double>> results;
  for (bool reverse : {false, true}) {
    auto a = RuntimeValue::makeBuffer(ir::Type::f32(), {8});
    auto b = RuntimeValue::makeBuffer(ir::Type::f32(), {8});
    auto out = RuntimeValue::makeBuffer(ir::Type::f32(), {8});
    for (int i = 0; i < 8; ++i) {
      a->floats[i] = i + 1;
      b->floats[i] = 10.0 * (i + 1);
      expected[i] = static_cast<float>(a->floats[i]) + static_cast<float>(b->floats[i]);
    }
    interp::Options opts;
    opts.reverseThreadOrder = reverse;
    interp::runKernel(*c.module, "vadd", launch,
                      {RuntimeValue::memref(a), RuntimeValue::memref(b), RuntimeValue::memref(out)}, opts);
    results.push_back(out->floats);
  }
  bool ok = results[0] == expected && results[1] == results[0];
  std::string shown;
  for (double v : results[0])
    shown += (shown.empty() ? "" : ",") + std::to_string(static_cast<long long>(v));
  return {ok, "c=[" + shown + "], reverse order " + (results[1] == results[0] ? "identical" : "differs")};
}

// ---- 10 -------------------------------------------------------------------

struct Cli {
  int code;
  std::string err;
};

Cli runVerify(const std::string &path) {
  std::string errFile = "/tmp/bridgegen_acceptance_" + std::to_string(::getpid()) + ".err";
  std::string cmd = std::string(BRIDGEGEN_CLI) + " verify '" + path + "' >/dev/null 2>" + errFile;
  int status = std::system(cmd.c_str());
  Cli r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, readFile(errFile)};
  std::remove(errFile.c_str());
  return r;
}

Outcome verifierCli() {
  std::size_t total = 0, matched = 0;
  std::set<std::string> categories;
  std::string firstMiss;
  std::vector<std::filesystem::path> files;
  for (const auto &e : std::filesystem::directory_iterator(data("malformed")))
    files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto &p : files) {
    auto expect = nlohmann::json::parse(readFile(p.string())).at("expect").get<std::string>();
    auto r = runVerify(p.string());
    ++total;
    categories.insert(expect);
    bool ok = r.code != 0 && r.err.find("error[" + expect + "]") != std::string::npos;
    matched += ok;
    if (!ok && firstMiss.empty())
      firstMiss = p.filename().string() + " exit=" + std::to_string(r.code) + " " + r.err;
  }
  const std::set<std::string> required = {"missing-terminator", "dominance", "arity", "unknown-op", "bad-successor"};
  bool coverage = std::includes(categories.begin(), categories.end(), required.begin(), required.end());
  bool ok = total >= kMinMalformed && matched == total && coverage;
  return {ok, std::to_string(matched) + "/" + std::to_string(total) + " modules rejected with expected category, " +
                  std::to_string(categories.size()) + " categories" + (firstMiss.empty() ? "" : "; " + firstMiss)};
}

// ---- 11 -------------------------------------------------------------------

void collectOpNames(const ir::Operation &op, std::set<std::string> &out) {
  out.insert(op.name());
  for (std::size_t r = 0; r < op.numRegions(); ++r) {
    const ir::Region &region = op.region(r);
    for (std::size_t b = 0; b < region.size(); ++b)
      for (std::size_t i = 0; i < region.block(b).size(); ++i)
        collectOpNames(region.block(b).op(i), out);
  }
}

Outcome dialectLoader() {
  auto first = dialects::loadDialectSpec(dialects::builtinDialectSpec("arith"));
  auto text = dialects::serializeDialect(first);
  auto second = dialects::loadDialectSpec(text);
  bool fixpoint = first == second && dialects::serializeDialect(second) == text;

  std::vector<ir::ModulePtr> goldens;
  goldens.push_back(driver::compileSource(registry(), sample("sigmoid.fir"), "sigmoid", "f32").module);
  goldens.push_back(driver::compileSource(registry(), sample("max.fir"), "max", "i64, i64").module);
  goldens.push_back(einsum::buildEinsumModule(codegen::scalarRegistry(), einsum::parseEinsum("(i,k),(k,j)->(i,j)"),
                                              fir::FrontendType::concrete("f32")));
  goldens.push_back(
      driver::compileSource(registry(), sample("vadd.fir"), "vadd", "memref{f32,1}, memref{f32,1}, memref{f32,1}")
          .module);
  std::set<std::string> names;
  for (const auto &m : goldens)
    for (std::size_t i = 0; i < m->topBlock().size(); ++i)
      collectOpNames(m->topBlock().op(i), names);
  auto reg = dialects::builtinRegistry();
  std::string missing;
  for (const auto &n : names)
    if (!reg->lookup(n))
      missing += " " + n;
  bool ok = fixpoint && missing.empty();
  return {ok, std::string("arith fixpoint=") + (fixpoint ? "yes" : "no") + ", " + std::to_string(names.size()) +
                  " golden op names, missing:" + (missing.empty() ? " none" : missing)};
}

} // namespace

int main() {
  report(1, "golden sigmoid", goldenSigmoid);
  report(2, "golden max", goldenMax);
  report(3, "CFG isomorphism", cfgIsomorphism);
  report(4, "phi conversion", phiConversion);
  report(5, "dispatch oracle", dispatchOracle);
  report(6, "inlining", inlining);
  report(7, "semantic sigmoid", semanticSigmoid);
  report(8, "einsum oracle", einsumOracle);
  report(9, "GPU kernel", gpuKernel);
  report(10, "verifier", verifierCli);
  report(11, "dialect spec loader", dialectLoader);
  return failures == 0 ? 0 : 1;
}
