#include <iostream>

#include "qfb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qfb::run(args, std::cin, std::cout, std::cerr);
}
