#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace cyclemt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitRuntime = 2,
};

struct CliIo {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
  EnvLookup env;
};

/// Entry point behind the `cyclemt` executable. `args` includes the program
/// name. Diagnostics go to io.err; stdout carries only results.
int run_cli(const std::vector<std::string>& args, CliIo io);

}  // namespace cyclemt::cli
