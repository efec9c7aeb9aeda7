#include <iostream>

#include "hetcycle/cli.hpp"

int main(int argc, char** argv) { return hetcycle::cli::run(argc, argv, std::cout, std::cerr); }
