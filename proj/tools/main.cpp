#include "ietlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ietlab::cli::run(argc, argv, std::cout, std::cerr); }
