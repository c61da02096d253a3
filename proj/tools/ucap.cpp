#include <iostream>

#include "ucap/cli.hpp"

int main(int argc, char** argv) { return ucap::run_command(argc, argv, std::cout, std::cerr); }
