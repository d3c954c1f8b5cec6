#include <iostream>

#include "perioda/cli.hpp"

int main(int argc, char** argv) { return perioda::cli::run(argc, argv, std::cout, std::cerr); }
