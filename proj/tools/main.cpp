#include <iostream>
#include <string>
#include <vector>

#include "hdfd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hdfd::run_cli(std::move(args), std::cout, std::cerr);
}
