#include <iostream>

#include "polykin/cli.hpp"

int main(int argc, char** argv) { return polykin::run_cli(argc, argv, std::cout, std::cerr); }
