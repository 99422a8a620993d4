#include <iostream>

#include "prograph/cli.hpp"

int main(int argc, char** argv) { return prograph::cli::run(argc, argv, std::cout, std::cerr); }
