#include <iostream>

#include "hyperagg/cli.hpp"

int main(int argc, char** argv) {
  return hyperagg::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
