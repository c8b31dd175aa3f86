#include <iostream>

#include "latinlab/cli.hpp"

int main(int argc, char** argv) { return latinlab::cli::main(argc, argv, std::cout, std::cerr); }
