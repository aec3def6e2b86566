#include <iostream>

#include "addcomb/cli.hpp"

int main(int argc, char** argv) { return addcomb::cli::main(argc, argv, std::cout, std::cerr); }
