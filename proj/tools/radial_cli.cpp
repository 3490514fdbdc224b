// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#include <iostream>
#include <string>
#include <vector>

#include "radial/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return radial::run_cli(args, std::cout, std::cerr);
}
