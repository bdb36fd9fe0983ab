#include <iostream>

#include "tri_cli/cli.hpp"

int main(int argc, char** argv) { return tri::cli::run(argc, argv, std::cout, std::cerr); }
