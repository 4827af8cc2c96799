#include <iostream>

#include "iblt/cli.hpp"

int main(int argc, char** argv) { return iblt::run_cli(argc, argv, std::cin, std::cout, std::cerr); }
