#include <iostream>
#include <string>
#include <vector>

#include "cgc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cgc::run(args, std::cout, std::cerr);
}
