#include <iostream>

#include "symsched/cli.hpp"

int main(int argc, char** argv) { return symsched::run_cli(argc, argv, std::cout, std::cerr); }
