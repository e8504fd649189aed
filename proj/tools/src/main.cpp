#include "hdmrge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hdmrge::run_cli(argc, argv, std::cout, std::cerr); }
