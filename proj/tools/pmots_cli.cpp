#include "pmots/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return pmots::cli::run(argc, argv, std::cout, std::cerr); }
