#include <iostream>
#include <string>
#include <vector>

#include "fidnp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fidnp::cli::run(args, std::cout, std::cerr);
}
