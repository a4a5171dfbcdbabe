#include <iostream>
#include <string>
#include <vector>

#include "gsirs/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gsirs::cli::run(args, std::cout, std::cerr);
}
