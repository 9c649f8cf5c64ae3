#include <iostream>

#include "fibz/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fibz::cli::run(args, std::cout, std::cerr);
}
