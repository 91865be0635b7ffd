#include "Support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace testsupport {

using namespace bridgegen;
using fir::FirArg;
using fir::FirFunction;
using fir::FirStatement;
using fir::FrontendType;

namespace {

int uniform(Rng &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <typename T> const T &pick(Rng &rng, const std::vector<T> &v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

enum class Term { Fall, Goto, IfNot, Return };

struct Shape {
  unsigned n = 0;
  std::vector<Term> term;
  std::vector<unsigned> target;
  std::vector<std::vector<unsigned>> succ;
};

std::optional<Shape> randomShape(Rng &rng, unsigned maxBlocks) {
  Shape s;
  s.n = static_cast<unsigned>(uniform(rng, 1, static_cast<int>(maxBlocks)));
  s.term.resize(s.n);
  s.target.assign(s.n, 0);
  s.succ.resize(s.n);
  for (unsigned k = 1; k <= s.n; ++k) {
    Term t;
    if (s.n == 1) {
      t = Term::Return;
    } else if (k == s.n) {
      t = uniform(rng, 0, 2) == 0 ? Term::Goto : Term::Return;
    } else {
      int r = uniform(rng, 0, 9);
      t = r < 3 ? Term::Fall : r < 5 ? Term::Goto : r < 9 ? Term::IfNot : Term::Return;
    }
    if (t == Term::Goto || t == Term::IfNot) {
      std::vector<unsigned> choices;
      for (unsigned b = 2; b <= s.n; ++b)
        if (t == Term::Goto || b != k + 1)
          choices.push_back(b);
      if (choices.empty())
        t = k == s.n ? Term::Return : Term::Fall;
      else
        s.target[k - 1] = pick(rng, choices);
    }
    s.term[k - 1] = t;
    auto &out = s.succ[k - 1];
    if (t == Term::Fall)
      out = {k + 1};
    else if (t == Term::Goto)
      out = {s.target[k - 1]};
    else if (t == Term::IfNot)
      out = {k + 1, s.target[k - 1]};
  }
  std::vector<bool> seen(s.n + 1, false);
  std::vector<unsigned> work{1};
  seen[1] = true;
  while (!work.empty()) {
    unsigned b = work.back();
    work.pop_back();
    for (unsigned x : s.succ[b - 1])
      if (!seen[x]) {
        seen[x] = true;
        work.push_back(x);
      }
  }
  for (unsigned b = 1; b <= s.n; ++b)
    if (!seen[b])
      return std::nullopt;
  return s;
}

FirStatement invoke(std::uint32_t id, std::string target, std::vector<FirArg> args, FrontendType type) {
  FirStatement st;
  st.id = id;
  st.body = fir::Invoke{std::move(target), std::move(args), std::move(type)};
  return st;
}

} // namespace

RandomFir randomFir(Rng &rng, unsigned maxBlocks) {
  std::optional<Shape> shape;
  while (!(shape = randomShape(rng, maxBlocks)))
    ;
  const Shape &s = *shape;
  const FrontendType i64 = FrontendType::concrete("i64");
  const FrontendType i1 = FrontendType::concrete("i1");

  std::vector<std::vector<unsigned>> preds(s.n + 1);
  for (unsigned b = 1; b <= s.n; ++b)
    for (unsigned x : s.succ[b - 1])
      if (std::find(preds[x].begin(), preds[x].end(), b) == preds[x].end())
        preds[x].push_back(b);

  FirFunction fn;
  fn.name = "rand";
  fn.paramNames = {"_a", "_b"};
  fn.paramTypes = {i64, i64};
  fn.blocks.resize(s.n);

  std::uint32_t nextId = 1;
  // i64 values live at the end of each block.
  std::vector<std::vector<FirArg>> liveOut(s.n + 1);
  std::vector<std::size_t> phiCount(s.n + 1, 0);

  auto operand = [&](const std::vector<FirArg> &avail) {
    if (uniform(rng, 0, 4) == 0)
      return FirArg::integer(uniform(rng, -3, 5));
    return pick(rng, avail);
  };

  for (unsigned k = 1; k <= s.n; ++k) {
    auto &stmts = fn.block(k).statements;
    std::vector<FirArg> avail{FirArg::param(0), FirArg::param(1)};
    if (k >= 2) {
      phiCount[k] = static_cast<std::size_t>(uniform(rng, 0, 2));
      for (std::size_t p = 0; p < phiCount[k]; ++p) {
        FirStatement st;
        st.id = nextId++;
        st.body = fir::Phi{{}, i64};
        stmts.push_back(st);
        avail.push_back(FirArg::ssa(st.id));
      }
    }
    int body = uniform(rng, 0, 3);
    for (int i = 0; i < body; ++i) {
      static const std::vector<std::string> ops{"+", "-", "*"};
      FirStatement st = invoke(nextId++, pick(rng, ops), {operand(avail), operand(avail)}, i64);
      stmts.push_back(st);
      avail.push_back(FirArg::ssa(st.id));
    }
    switch (s.term[k - 1]) {
    case Term::Fall:
      break;
    case Term::Goto:
      stmts.push_back({0, fir::Goto{s.target[k - 1]}});
      break;
    case Term::IfNot: {
      FirStatement cmp = invoke(nextId++, "<", {operand(avail), operand(avail)}, i1);
      stmts.push_back(cmp);
      stmts.push_back({0, fir::GotoIfNot{FirArg::ssa(cmp.id), s.target[k - 1]}});
      break;
    }
    case Term::Return:
      stmts.push_back({0, fir::Return{pick(rng, avail)}});
      break;
    }
    liveOut[k] = avail;
  }

  for (unsigned k = 2; k <= s.n; ++k)
    for (std::size_t p = 0; p < phiCount[k]; ++p) {
      auto *phi = fn.block(k).statements[p].as<fir::Phi>();
      for (unsigned pred : preds[k])
        phi->incomings.push_back({pred, uniform(rng, 0, 5) == 0 ? FirArg::integer(uniform(rng, -2, 2))
                                                                : pick(rng, liveOut[pred])});
    }

  RandomFir out;
  out.fn = fir::normalize(fn);
  out.edges = s.succ;
  return out;
}

std::optional<std::int64_t> evalFir(const FirFunction &fn, const std::vector<std::int64_t> &args,
                                    std::uint64_t stepLimit) {
  std::map<std::uint32_t, std::int64_t> values;
  auto get = [&](const FirArg &a) -> std::int64_t {
    switch (a.kind) {
    case FirArg::Kind::Ssa:
      return values.at(a.ref);
    case FirArg::Kind::Param:
      return args.at(a.ref);
    case FirArg::Kind::Int:
      return a.intValue;
    case FirArg::Kind::Bool:
      return a.boolValue ? 1 : 0;
    case FirArg::Kind::Float:
      break;
    }
    throw std::logic_error("float literal in an integer function");
  };

  unsigned block = 1, prev = 0;
  std::uint64_t steps = 0;
  while (true) {
    const auto &stmts = fn.block(block).statements;
    std::map<std::uint32_t, std::int64_t> phiValues;
    std::size_t i = 0;
    for (; i < stmts.size() && stmts[i].is<fir::Phi>(); ++i)
      for (const auto &in : stmts[i].as<fir::Phi>()->incomings)
        if (in.pred == prev)
          phiValues[stmts[i].id] = get(in.value);
    for (auto &[id, v] : phiValues)
      values[id] = v;

    std::optional<unsigned> next;
    for (; i < stmts.size(); ++i) {
      if (++steps > stepLimit)
        return std::nullopt;
      const FirStatement &st = stmts[i];
      if (const auto *inv = st.as<fir::Invoke>()) {
        auto x = static_cast<std::uint64_t>(get(inv->args[0]));
        std::uint64_t y = inv->args.size() > 1 ? static_cast<std::uint64_t>(get(inv->args[1])) : 0;
        std::int64_t r;
        if (inv->target == "+")
          r = static_cast<std::int64_t>(x + y);
        else if (inv->target == "-")
          r = static_cast<std::int64_t>(x - y);
        else if (inv->target == "*")
          r = static_cast<std::int64_t>(x * y);
        else if (inv->target == "<")
          r = static_cast<std::int64_t>(x) < static_cast<std::int64_t>(y);
        else if (inv->target == "bool_conversion_intrinsic")
          r = static_cast<std::int64_t>(x);
        else
          throw std::logic_error("evalFir: unsupported call " + inv->target);
        values[st.id] = r;
      } else if (const auto *g = st.as<fir::Goto>()) {
        next = g->target;
        break;
      } else if (const auto *gn = st.as<fir::GotoIfNot>()) {
        next = get(gn->cond) ? block + 1 : gn->target;
        break;
      } else if (const auto *ret = st.as<fir::Return>()) {
        return ret->value ? get(*ret->value) : 0;
      }
    }
    prev = block;
    block = next ? *next : block + 1;
    if (++steps > stepLimit)
      return std::nullopt;
  }
}

bool oracleSubtype(int sub, int super) {
  for (int t = sub; t != -1; t = kDispatchParent[static_cast<std::size_t>(t)])
    if (t == super)
      return true;
  return false;
}

OracleOutcome oracleResolve(const std::vector<std::vector<int>> &signatures, const std::vector<int> &args,
                            std::size_t *winner) {
  std::vector<std::size_t> applicable;
  for (std::size_t s = 0; s < signatures.size(); ++s) {
    const auto &sig = signatures[s];
    if (sig.size() != args.size())
      continue;
    bool ok = true;
    for (std::size_t i = 0; i < args.size(); ++i)
      ok = ok && oracleSubtype(args[i], sig[i]);
    if (ok)
      applicable.push_back(s);
  }
  if (applicable.empty())
    return OracleOutcome::NoMethod;
  auto leq = [&](std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < args.size(); ++i)
      if (!oracleSubtype(signatures[a][i], signatures[b][i]))
        return false;
    return true;
  };
  for (std::size_t a : applicable) {
    bool best = true;
    for (std::size_t b : applicable)
      best = best && leq(a, b);
    if (best) {
      if (winner)
        *winner = a;
      return OracleOutcome::Found;
    }
  }
  return OracleOutcome::Ambiguous;
}

std::string EinsumCase::text() const {
  auto tuple = [](const std::vector<char> &t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i)
        s += ",";
      s += t[i];
    }
    return s + ")";
  };
  std::string s;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i)
      s += ",";
    s += tuple(inputs[i]);
  }
  return s + "->" + tuple(output);
}

std::vector<std::int64_t> EinsumCase::dims(const std::vector<char> &tuple) const {
  std::vector<std::int64_t> d;
  for (char c : tuple)
    d.push_back(extent.at(c));
  return d;
}

EinsumCase randomEinsum(Rng &rng, unsigned maxOperands) {
  const std::string pool = "ijklm";
  EinsumCase c;
  int numInputs = uniform(rng, 1, static_cast<int>(maxOperands) - 1);
  std::set<char> used;
  for (int n = 0; n < numInputs; ++n) {
    std::string letters = pool;
    std::shuffle(letters.begin(), letters.end(), rng);
    int rank = uniform(rng, 1, 3);
    // Favour shared indices so contractions show up.
    std::vector<char> tuple;
    std::vector<char> shared(used.begin(), used.end());
    std::shuffle(shared.begin(), shared.end(), rng);
    for (char ch : shared)
      if (static_cast<int>(tuple.size()) < rank && uniform(rng, 0, 1))
        tuple.push_back(ch);
    for (char ch : letters)
      if (static_cast<int>(tuple.size()) < rank && std::find(tuple.begin(), tuple.end(), ch) == tuple.end())
        tuple.push_back(ch);
    std::shuffle(tuple.begin(), tuple.end(), rng);
    for (char ch : tuple)
      used.insert(ch);
    c.inputs.push_back(tuple);
  }
  std::vector<char> all(used.begin(), used.end());
  std::shuffle(all.begin(), all.end(), rng);
  int outRank = uniform(rng, 0, std::min<int>(3, static_cast<int>(all.size())));
  c.output.assign(all.begin(), all.begin() + outRank);
  for (char ch : used)
    c.extent[ch] = uniform(rng, 1, 5);
  return c;
}

DenseTensor randomTensor(Rng &rng, std::vector<std::int64_t> dims) {
  DenseTensor t;
  t.dims = std::move(dims);
  std::size_t n = 1;
  for (auto d : t.dims)
    n *= static_cast<std::size_t>(d);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    t.data.push_back(static_cast<float>(dist(rng)));
  return t;
}

namespace {

std::size_t flatIndex(const std::vector<char> &tuple, const std::vector<std::int64_t> &dims,
                      const std::map<char, std::int64_t> &at) {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < tuple.size(); ++d)
    flat = flat * static_cast<std::size_t>(dims[d]) + static_cast<std::size_t>(at.at(tuple[d]));
  return flat;
}

} // namespace

DenseTensor bruteForceEinsum(const EinsumCase &c, const std::vector<DenseTensor> &inputs,
                             std::vector<double> *scale) {
  DenseTensor out;
  out.dims = c.dims(c.output);
  std::size_t n = 1;
  for (auto d : out.dims)
    n *= static_cast<std::size_t>(d);
  out.data.assign(n, 0.0);
  if (scale)
    scale->assign(n, 0.0);

  std::vector<char> names;
  for (auto &[ch, e] : c.extent)
    names.push_back(ch);
  std::map<char, std::int64_t> at;
  std::function<void(std::size_t)> loop = [&](std::size_t depth) {
    if (depth == names.size()) {
      double prod = 1.0;
      for (std::size_t k = 0; k < inputs.size(); ++k)
        prod *= inputs[k].data[flatIndex(c.inputs[k], inputs[k].dims, at)];
      std::size_t o = flatIndex(c.output, out.dims, at);
      out.data[o] += prod;
      if (scale)
        (*scale)[o] += std::fabs(prod);
      return;
    }
    for (std::int64_t v = 0; v < c.extent.at(names[depth]); ++v) {
      at[names[depth]] = v;
      loop(depth + 1);
    }
  };
  loop(0);
  return out;
}

double einsumRelativeError(const std::vector<double> &got, const DenseTensor &want, const std::vector<double> &scale) {
  if (got.size() != want.data.size())
    return INFINITY;
  double worst = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    double denom = std::max(scale[i], 1e-30);
    double err = std::fabs(got[i] - want.data[i]);
    worst = std::max(worst, err == 0 ? 0.0 : err / denom);
  }
  return worst;
}

interp::RuntimeValue toRuntime(const DenseTensor &t, bool f32) {
  auto buf = interp::RuntimeValue::makeBuffer(f32 ? ir::Type::f32() : ir::Type::f64(), t.dims);
  auto v = interp::RuntimeValue::tensor(buf);
  for (std::size_t i = 0; i < t.data.size(); ++i)
    v.setElement(i, f32 ? interp::RuntimeValue::f32(static_cast<float>(t.data[i]))
                        : interp::RuntimeValue::f64(t.data[i]));
  return v;
}

std::vector<double> fromRuntime(const interp::RuntimeValue &v) { return v.buffer()->floats; }

} // namespace testsupport
