#include <iostream>
#include <string>
#include <vector>

#include "cascade/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return cascade::run_command(args, std::cout, std::cerr);
}
