#include <iostream>
#include <string>
#include <vector>

#include "ilvelt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ilvelt::run_cli(args, std::cout, std::cerr);
}
