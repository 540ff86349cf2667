#include <iostream>
#include <string>
#include <vector>

#include "regretlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return regretlab::run_cli(args, std::cout, std::cerr);
}
