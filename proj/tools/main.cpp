#include <iostream>
#include <string>
#include <vector>

#include "erw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return erw::run(args, std::cout, std::cerr);
}
