#include <iostream>

#include "savage/cli.hpp"

int main(int argc, char** argv) { return savage::cli::run_cli(argc, argv, std::cout, std::cerr); }
