#include <iostream>

#include "hckit/cli.hpp"

int main(int argc, char** argv) { return hckit::run_cli(argc, argv, std::cout, std::cerr); }
