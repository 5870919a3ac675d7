#include <iostream>

#include "bbkit/cli.hpp"

int main(int argc, char** argv) { return bbkit::run_cli(argc, argv, std::cout, std::cerr); }
