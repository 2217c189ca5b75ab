#include <iostream>

#include "msrsim/cli/cli.hpp"

int main(int argc, char** argv) { return msrsim::cli::main(argc, argv, std::cout, std::cerr); }
