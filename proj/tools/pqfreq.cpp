#include <iostream>

#include "pqfreq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pqfreq::cli::dispatch(args, std::cout, std::cerr);
}
