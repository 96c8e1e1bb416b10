#include <iostream>
#include <string>
#include <vector>

#include "nqd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nqd::run_cli(args, std::cout, std::cerr);
}
