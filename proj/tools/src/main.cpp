#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return collab::tools::run_cli({argv, argv + argc}, std::cout, std::cerr);
}
