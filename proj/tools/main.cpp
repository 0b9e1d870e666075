#include <iostream>

#include "bilayer/cli.hpp"

int main(int argc, char** argv) { return bilayer::cli::run(argc, argv, std::cout, std::cerr); }
