#include <iostream>

#include "abfrac/cli.hpp"

int main(int argc, char** argv) { return abfrac::cli::run(argc, argv, std::cout, std::cerr); }
