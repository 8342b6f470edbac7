#include <iostream>

#include "scherk/cli.hpp"

int main(int argc, char** argv) {
  return scherk::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
