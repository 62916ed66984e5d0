#include "fmm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fmm::cli::main(argc, argv, std::cout, std::cerr); }
