#pragma once

#include "bridgegen/dialects/Dialect.hpp"
#include "bridgegen/ir/IR.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace helpers {

using namespace bridgegen;

/// func.func @name with the given signature; leaves the insertion point at
/// the end of its entry block.
inline ir::Block &makeFunction(const dialects::DialectRegistry &reg, ir::Module &m, const std::string &name,
                               std::vector<ir::Type> inputs, std::vector<ir::Type> results) {
  m.setInsertionPointToEnd(m.topBlock());
  dialects::OpArgs args;
  args.attributes["sym_name"] = ir::Attribute::string(name);
  args.attributes["function_type"] = ir::Attribute::type(ir::Type::function(inputs, results));
  ir::Operation &f = dialects::buildOp(reg, m, "func.func", std::move(args));
  ir::Block &entry = m.appendBlock(f.region(0), inputs);
  m.setInsertionPointToEnd(entry);
  return entry;
}

inline ir::Operation &build(const dialects::DialectRegistry &reg, ir::Module &m, const std::string &name,
                            ir::ValueList operands, ir::AttrMap attrs = {}, std::vector<ir::Successor> succ = {}) {
  dialects::OpArgs args;
  args.operands = std::move(operands);
  args.attributes = std::move(attrs);
  args.successors = std::move(succ);
  return dialects::buildOp(reg, m, name, std::move(args));
}

inline std::string readFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Lines with surrounding whitespace removed and blank lines dropped.
inline std::vector<std::string> trimmedLines(const std::string &text) {
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

struct CliResult {
  int exitCode = -1;
  std::string out;
  std::string err;
};

/// Runs the CLI binary through the shell. `args` is pasted verbatim.
inline CliResult runCli(const std::string &args, const std::string &env = "") {
  static int counter = 0;
  std::string base = "/tmp/bridgegen_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  std::string cmd = env + (env.empty() ? "" : " ") + BRIDGEGEN_CLI + std::string(" ") + args + " >" + base +
                    ".out 2>" + base + ".err";
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = readFile(base + ".out");
  r.err = readFile(base + ".err");
  std::remove((base + ".out").c_str());
  std::remove((base + ".err").c_str());
  return r;
}

} // namespace helpers
