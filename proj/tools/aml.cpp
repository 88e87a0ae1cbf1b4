#include <iostream>

#include "aml/cli/commands.hpp"

int main(int argc, char** argv) { return aml::cli::run_cli(argc, argv, std::cout, std::cerr); }
