#include <iostream>

#include "fftower/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fftower::run_cli(args, std::cin, std::cout, std::cerr);
}
