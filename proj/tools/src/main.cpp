#include <iostream>

#include "c2c/cli.hpp"

int main(int argc, char** argv) { return c2c::cli::run(argc, argv, std::cout, std::cerr); }
