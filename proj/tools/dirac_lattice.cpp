#include <iostream>

#include "dlat/cli.hpp"

int main(int argc, char** argv) { return dlat::run_cli(argc, argv, std::cout, std::cerr); }
