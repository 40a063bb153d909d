#include <iostream>

#include "arsim/cli.hpp"

int main(int argc, char** argv) { return arsim::run_cli(argc, argv, std::cout, std::cerr); }
