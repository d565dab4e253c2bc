#include <iostream>

#include "jumpset/cli.hpp"

int main(int argc, char** argv) { return jumpset::run_cli(argc, argv, std::cout, std::cerr); }
