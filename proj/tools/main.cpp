#include <iostream>
#include <string>
#include <vector>

#include "s3sr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return s3sr::run_cli(args, std::cout, std::cerr);
}
