#include <iostream>
#include <string>
#include <vector>

#include "choquet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return choquet::cli::run(args, std::cout, std::cerr);
}
