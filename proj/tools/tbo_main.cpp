#include <iostream>

#include "tbo/cli.hpp"

int main(int argc, char** argv) { return tbo::cli::run_cli(argc, argv, std::cout, std::cerr); }
