#include <iostream>

#include "qstat/cli.hpp"

int main(int argc, char** argv) { return qstat::run_cli(argc, argv, std::cout, std::cerr); }
