#include <iostream>
#include <string>
#include <vector>

#include "kinetic/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return kinetic::cli_main(args, std::cout, std::cerr);
}
