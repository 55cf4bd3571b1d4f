#include <iostream>
#include <string>
#include <vector>

#include "experiment.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wick::cli::run(args, std::cout, std::cerr);
}
