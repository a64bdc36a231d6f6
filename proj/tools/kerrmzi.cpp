#include <iostream>

#include "kerrmzi/cli.hpp"

int main(int argc, char** argv) { return kerrmzi::cli::run(argc, argv, std::cout, std::cerr); }
