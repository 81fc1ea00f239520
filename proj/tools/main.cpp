#include <iostream>

#include "cli/app.hpp"

int main(int argc, char** argv) { return ogb::cli::main(argc, argv, std::cout, std::cerr); }
