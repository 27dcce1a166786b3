#include <iostream>
#include <string>
#include <vector>

#include "fclock/cli.hpp"

int main(int argc, char** argv) {
  return fclock::cli::main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
