#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  puppetwire::cli::configure_logging();
  const std::vector<std::string> args(argv + 1, argv + argc);
  return puppetwire::cli::run(args, std::cout, std::cerr);
}
