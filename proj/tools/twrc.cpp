#include <iostream>
#include <string>
#include <vector>

#include "twrc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return twrc::run_cli(args, std::cout, std::cerr);
}
