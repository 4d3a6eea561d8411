#include <iostream>

#include "gramwalk/cli.hpp"

int main(int argc, char** argv) { return gramwalk::cli::main(argc, argv, std::cout, std::cerr); }
