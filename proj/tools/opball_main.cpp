#include <iostream>
#include <string>
#include <vector>

#include "opball/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return opball::run(args, std::cout, std::cerr);
}
