#include <iostream>

#include "quivercells/cli.hpp"

int main(int argc, char** argv) { return quivercells::cli::run(argc, argv, std::cout, std::cerr); }
