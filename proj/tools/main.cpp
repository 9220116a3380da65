#include <iostream>

#include "hkq/cli.hpp"

int main(int argc, char** argv) {
  return hkq::cli::main_entry({argv + 1, argv + argc}, std::cout, std::cerr);
}
