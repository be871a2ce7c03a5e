#include <iostream>

#include "moment/cli/commands.hpp"

int main(int argc, char** argv) { return moment::cli::run(argc, argv, std::cout, std::cerr); }
