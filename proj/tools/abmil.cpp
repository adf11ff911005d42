#include <iostream>
#include <string>
#include <vector>

#include "abmil/cli.hpp"

int main(int argc, char** argv) {
  return abmil::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
