#include <iostream>

#include "fairnav/cli.hpp"

int main(int argc, char** argv) { return fairnav::run_cli(argc, argv, std::cout, std::cerr); }
