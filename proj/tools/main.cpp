#include <iostream>

#include "nadp/cli.hpp"

int main(int argc, char** argv) {
  return nadp::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
