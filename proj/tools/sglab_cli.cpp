#include <iostream>

#include "sglab/commands.hpp"

int main(int argc, char** argv) { return sglab::run_cli(argc, argv, std::cout, std::cerr); }
