#include <iostream>
#include <string>
#include <vector>

#include "alab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return alab::dispatch(args, std::cout, std::cerr);
}
