#include <iostream>
#include <string>
#include <vector>

#include "latarb/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return latarb::cli::run(args, std::cout, std::cerr);
}
