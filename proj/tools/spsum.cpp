#include <iostream>

#include "spsum/cli.hpp"

int main(int argc, char** argv) { return spsum::cli::run(argc, argv, std::cout, std::cerr); }
