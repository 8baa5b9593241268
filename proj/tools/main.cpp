#include <iostream>

#include "ferrohopf/cli.hpp"

int main(int argc, char** argv) { return ferrohopf::cli::main(argc, argv, std::cout, std::cerr); }
