#include <iostream>

#include "tpauc/cli.hpp"

int main(int argc, char** argv) { return tpauc::run_cli(argc, argv, std::cout, std::cerr); }
