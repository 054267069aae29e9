#include <iostream>

#include "qrde/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return qrde::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
