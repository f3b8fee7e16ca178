#include <iostream>

#include "cnoidal/cli.hpp"

int main(int argc, char** argv) { return cnoidal::cli::run(argc, argv, std::cout, std::cerr); }
