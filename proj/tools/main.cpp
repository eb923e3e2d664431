#include <iostream>

#include "specdisc/cli.hpp"

int main(int argc, char** argv) { return specdisc::run_cli(argc, argv, std::cout, std::cerr); }
