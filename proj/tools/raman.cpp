#include <iostream>

#include "raman/cli/commands.hpp"

int main(int argc, char **argv) { return raman::cli::run(argc, argv, std::cout, std::cerr); }
