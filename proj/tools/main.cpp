#include <iostream>
#include <string>
#include <vector>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return cyclemt::cli::run_cli(
      args, {std::cout, std::cerr, std::cin, cyclemt::cli::process_environment()});
}
