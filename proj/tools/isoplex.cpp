#include <iostream>

#include "isoplex/cli.hpp"

int main(int argc, char** argv) { return isoplex::run_cli(argc, argv, std::cout, std::cerr); }
