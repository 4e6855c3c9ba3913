#include <iostream>
#include <string>
#include <vector>

#include "tol/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tol::run_cli(args, std::cout, std::cerr);
}
