#include <iostream>

#include "gpl/cli.hpp"

int main(int argc, char** argv) {
  return gpl::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
