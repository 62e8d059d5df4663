#include <iostream>

#include "dvr/cli.hpp"

int main(int argc, char** argv) {
  dvr::cli::Result r = dvr::cli::run(std::vector<std::string>(argv + 1, argv + argc));
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
